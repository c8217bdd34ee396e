#pragma once

#include "negdim/bose_model.hpp"
#include "negdim/concentration.hpp"
#include "negdim/corpus.hpp"
#include "negdim/errors.hpp"
#include "negdim/fitting.hpp"
#include "negdim/text_io.hpp"
#include "negdim/weights.hpp"

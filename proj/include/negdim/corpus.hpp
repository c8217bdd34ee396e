#pragma once

// Frequency dictionaries built from plain UTF-8 text, the frequency spectrum
// (number of distinct words per occurrence count) and the inverted-rank
// curve counted from the rare end.

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace negdim {

struct TokenizerConfig {
  bool keep_hyphens = false;   ///< keep '-' between two letters inside a word
  std::size_t min_length = 1;  ///< in code points
};

/// Lowercased maximal runs of Unicode letters. Throws EncodingError on
/// invalid UTF-8.
std::vector<std::string> tokenize(std::string_view text, const TokenizerConfig& cfg = {});

class FrequencyDictionary {
 public:
  FrequencyDictionary() = default;

  void add(std::string_view word, std::int64_t count = 1);
  /// Sums counts; commutative and associative.
  void merge(const FrequencyDictionary& other);

  const std::map<std::string, std::int64_t, std::less<>>& entries() const noexcept {
    return entries_;
  }
  std::int64_t total_tokens() const noexcept { return total_; }
  std::size_t dict_size() const noexcept { return entries_.size(); }

  friend bool operator==(const FrequencyDictionary&, const FrequencyDictionary&) = default;

 private:
  std::map<std::string, std::int64_t, std::less<>> entries_;
  std::int64_t total_ = 0;
};

FrequencyDictionary frequency_dictionary(const std::vector<std::string>& tokens);

/// frequency omega -> number of distinct words occurring omega times.
struct FrequencySpectrum {
  std::map<std::int64_t, std::int64_t> counts;

  std::int64_t dict_size() const;
  std::int64_t total_tokens() const;
};

FrequencySpectrum frequency_spectrum(const FrequencyDictionary& dict);

struct RankPoint {
  std::int64_t omega;
  /// Cumulative distinct-word count up to omega; integer-valued for corpora,
  /// real for model-generated curves.
  double inverted_rank;
};

struct RankCurve {
  std::vector<RankPoint> points;
  std::size_t cut_low = 0;
  std::size_t cut_high = 0;
};

/// Drops the `cut_low` smallest and `cut_high` largest distinct frequencies,
/// then cumulates from the rare end.
RankCurve inverted_rank_curve(const FrequencySpectrum& spec, std::size_t cut_low,
                              std::size_t cut_high);

/// Fraction of the dictionary occurring exactly once.
double condensate_fraction(const FrequencySpectrum& spec);

// Serialization: TSV "word\tcount" sorted by count desc then word asc; CSV
// with header "omega,count" and "omega,inverted_rank".
std::string dictionary_tsv(const FrequencyDictionary& dict);
std::string spectrum_csv(const FrequencySpectrum& spec);
std::string curve_csv(const RankCurve& curve);
FrequencySpectrum parse_spectrum_csv(std::string_view text);
RankCurve parse_curve_csv(std::string_view text);

}  // namespace negdim

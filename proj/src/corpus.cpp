#include "negdim/corpus.hpp"

#include <clocale>
#include <locale.h>
#include <wctype.h>

#include <algorithm>
#include <sstream>

#include "negdim/errors.hpp"
#include "negdim/text_io.hpp"

namespace negdim {

namespace {

locale_t utf8_locale() {
  static const locale_t loc = [] {
    locale_t l = newlocale(LC_CTYPE_MASK, "C.UTF-8", static_cast<locale_t>(nullptr));
    if (l == static_cast<locale_t>(nullptr))
      l = newlocale(LC_CTYPE_MASK, "C.utf8", static_cast<locale_t>(nullptr));
    if (l == static_cast<locale_t>(nullptr))
      throw std::runtime_error("no UTF-8 C locale available for Unicode letter classes");
    return l;
  }();
  return loc;
}

// Decodes one code point starting at text[pos]; advances pos.
char32_t decode(std::string_view text, std::size_t& pos) {
  const auto b0 = static_cast<unsigned char>(text[pos]);
  const std::size_t start = pos;
  auto fail = [&] { return EncodingError("invalid UTF-8 at byte " + std::to_string(start), start); };
  std::size_t len = 0;
  char32_t cp = 0;
  char32_t min = 0;
  if (b0 < 0x80) {
    ++pos;
    return b0;
  } else if ((b0 & 0xE0) == 0xC0) {
    len = 2, cp = b0 & 0x1F, min = 0x80;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3, cp = b0 & 0x0F, min = 0x800;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4, cp = b0 & 0x07, min = 0x10000;
  } else {
    throw fail();
  }
  if (pos + len > text.size()) throw fail();
  for (std::size_t k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(text[pos + k]);
    if ((b & 0xC0) != 0x80) throw fail();
    cp = (cp << 6) | (b & 0x3F);
  }
  if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) throw fail();
  pos += len;
  return cp;
}

void encode(char32_t cp, std::string& out) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text, const TokenizerConfig& cfg) {
  const locale_t loc = utf8_locale();
  std::vector<char32_t> cps;
  cps.reserve(text.size());
  for (std::size_t pos = 0; pos < text.size();) cps.push_back(decode(text, pos));

  auto is_letter = [&](std::size_t k) {
    return k < cps.size() && iswalpha_l(static_cast<wint_t>(cps[k]), loc) != 0;
  };

  std::vector<std::string> out;
  std::string word;
  std::size_t length = 0;
  auto flush = [&] {
    if (length > 0 && length >= cfg.min_length) out.push_back(word);
    word.clear();
    length = 0;
  };
  for (std::size_t k = 0; k < cps.size(); ++k) {
    if (is_letter(k)) {
      encode(static_cast<char32_t>(towlower_l(static_cast<wint_t>(cps[k]), loc)), word);
      ++length;
    } else if (cfg.keep_hyphens && cps[k] == U'-' && length > 0 && is_letter(k + 1)) {
      word.push_back('-');
    } else {
      flush();
    }
  }
  flush();
  return out;
}

void FrequencyDictionary::add(std::string_view word, std::int64_t count) {
  if (count < 1) throw DomainError("word counts must be positive");
  if (word.empty()) throw DomainError("empty word");
  auto it = entries_.find(word);
  if (it == entries_.end())
    entries_.emplace(std::string(word), count);
  else
    it->second += count;
  total_ += count;
}

void FrequencyDictionary::merge(const FrequencyDictionary& other) {
  for (const auto& [word, count] : other.entries_) add(word, count);
}

FrequencyDictionary frequency_dictionary(const std::vector<std::string>& tokens) {
  FrequencyDictionary dict;
  for (const auto& t : tokens) dict.add(t);
  return dict;
}

std::int64_t FrequencySpectrum::dict_size() const {
  std::int64_t n = 0;
  for (const auto& [omega, c] : counts) n += c;
  return n;
}

std::int64_t FrequencySpectrum::total_tokens() const {
  std::int64_t n = 0;
  for (const auto& [omega, c] : counts) n += omega * c;
  return n;
}

FrequencySpectrum frequency_spectrum(const FrequencyDictionary& dict) {
  FrequencySpectrum spec;
  for (const auto& [word, count] : dict.entries()) ++spec.counts[count];
  return spec;
}

RankCurve inverted_rank_curve(const FrequencySpectrum& spec, std::size_t cut_low,
                              std::size_t cut_high) {
  const std::size_t distinct = spec.counts.size();
  if (cut_low + cut_high >= distinct)
    throw DomainError("cuts (" + std::to_string(cut_low) + " + " + std::to_string(cut_high) +
                      ") must leave at least one of " + std::to_string(distinct) +
                      " distinct frequencies");
  RankCurve curve{{}, cut_low, cut_high};
  curve.points.reserve(distinct - cut_low - cut_high);
  auto it = std::next(spec.counts.begin(), static_cast<std::ptrdiff_t>(cut_low));
  std::int64_t acc = 0;
  for (std::size_t k = cut_low; k < distinct - cut_high; ++k, ++it) {
    acc += it->second;
    curve.points.push_back({it->first, static_cast<double>(acc)});
  }
  return curve;
}

double condensate_fraction(const FrequencySpectrum& spec) {
  const std::int64_t size = spec.dict_size();
  if (size == 0) throw DomainError("empty spectrum");
  const auto it = spec.counts.find(1);
  const std::int64_t hapax = it == spec.counts.end() ? 0 : it->second;
  return static_cast<double>(hapax) / static_cast<double>(size);
}

std::string dictionary_tsv(const FrequencyDictionary& dict) {
  std::vector<std::pair<std::string_view, std::int64_t>> rows(dict.entries().begin(),
                                                              dict.entries().end());
  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::string out;
  for (const auto& [word, count] : rows) {
    out.append(word);
    out.push_back('\t');
    out.append(std::to_string(count));
    out.push_back('\n');
  }
  return out;
}

std::string spectrum_csv(const FrequencySpectrum& spec) {
  std::ostringstream out;
  out << "omega,count\n";
  for (const auto& [omega, c] : spec.counts) out << omega << ',' << c << '\n';
  return out.str();
}

std::string curve_csv(const RankCurve& curve) {
  std::ostringstream out;
  out << "omega,inverted_rank\n";
  for (const auto& p : curve.points) out << p.omega << ',' << format_double(p.inverted_rank) << '\n';
  return out.str();
}

namespace {

std::vector<std::pair<std::string_view, std::string_view>> parse_two_columns(
    std::string_view text, std::string_view header) {
  const auto ls = lines(text);
  if (ls.empty() || ls.front() != header)
    throw DomainError("expected CSV header '" + std::string(header) + "'");
  std::vector<std::pair<std::string_view, std::string_view>> out;
  for (std::size_t k = 1; k < ls.size(); ++k) {
    if (ls[k].empty()) continue;
    const auto f = split(ls[k], ',');
    if (f.size() != 2)
      throw DomainError("line " + std::to_string(k + 1) + ": expected 2 fields");
    out.emplace_back(f[0], f[1]);
  }
  return out;
}

}  // namespace

FrequencySpectrum parse_spectrum_csv(std::string_view text) {
  FrequencySpectrum spec;
  for (const auto& [a, b] : parse_two_columns(text, "omega,count")) {
    const std::int64_t omega = parse_int(a);
    const std::int64_t c = parse_int(b);
    if (omega < 1 || c < 1) throw DomainError("spectrum entries must be positive");
    if (!spec.counts.emplace(omega, c).second)
      throw DomainError("duplicate frequency " + std::to_string(omega));
  }
  return spec;
}

RankCurve parse_curve_csv(std::string_view text) {
  RankCurve curve;
  for (const auto& [a, b] : parse_two_columns(text, "omega,inverted_rank")) {
    const RankPoint p{parse_int(a), parse_double(b)};
    if (p.omega < 1) throw DomainError("frequencies must be positive");
    if (!curve.points.empty() && (p.omega <= curve.points.back().omega ||
                                  p.inverted_rank <= curve.points.back().inverted_rank))
      throw DomainError("rank curve must be strictly increasing");
    curve.points.push_back(p);
  }
  if (curve.points.empty()) throw DomainError("empty rank curve");
  return curve;
}

}  // namespace negdim

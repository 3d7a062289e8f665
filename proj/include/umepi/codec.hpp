#pragma once

#include <algorithm>
#include <charconv>
#include <istream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "umepi/model.hpp"
#include "umepi/occurrence.hpp"

namespace umepi {

/// One mined high-utility episode.
struct HueRecord {
  Episode episode;
  Utility utility = 0;
  MoSet mo_set;
  friend bool operator==(const HueRecord&, const HueRecord&) = default;
};

struct UtilityMismatch {
  Episode episode;
  Utility utility_a = 0;
  Utility utility_b = 0;
  friend bool operator==(const UtilityMismatch&, const UtilityMismatch&) = default;
};

/// Differences between two HUE lists keyed by canonical episode. `missing`
/// holds episodes of the first list absent from the second, `extra` the reverse.
struct DiffReport {
  std::vector<HueRecord> missing;
  std::vector<HueRecord> extra;
  std::vector<UtilityMismatch> utility_mismatch;

  bool empty() const noexcept { return missing.empty() && extra.empty() && utility_mismatch.empty(); }
};

struct NativeDocument {
  EventSequence sequence;
  UtilityTable table;
};

struct Diagnostic {
  std::size_t line = 0;
  std::string message;
};

struct TransactionDocument {
  EventSequence sequence;
  std::vector<Diagnostic> warnings;  // checksum mismatches, non-fatal
};

enum class HueFormat { tsv, json };

namespace detail {

struct Token {
  std::string_view text;
  std::size_t column = 0;  // 1-based
};

inline std::vector<Token> split_ws(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i == line.size()) break;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    out.push_back({line.substr(i, j - i), i + 1});
    i = j;
  }
  return out;
}

inline std::optional<std::int64_t> parse_int(std::string_view text) {
  std::int64_t value = 0;
  if (text.empty()) return std::nullopt;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

inline std::int64_t expect_positive(std::string_view text, std::size_t line, std::size_t column,
                                    std::string_view what) {
  auto value = parse_int(text);
  if (!value) {
    throw Error(ErrorKind::SyntaxError, "expected integer " + std::string(what) + ", got '" + std::string(text) + "'",
                line, column);
  }
  if (*value <= 0) {
    throw Error(ErrorKind::NonPositiveValue, std::string(what) + " must be positive", line, column);
  }
  return *value;
}

inline std::vector<std::string> read_lines(std::istream& in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  if (in.bad()) throw Error(ErrorKind::Io, "failed reading input stream");
  return lines;
}

}  // namespace detail

/// Native `.useq` reader: `U <event> <unitUtility>` and
/// `T <time> <event>:<qty> ...` lines, `#` comments.
inline NativeDocument parse_native(std::istream& in) {
  struct RawRef {
    std::string name;
    Quantity quantity;
    std::size_t line, column;
  };
  struct RawPoint {
    Time time;
    std::vector<RawRef> events;
  };

  std::map<std::string, Utility, std::less<>> units;
  std::vector<RawPoint> points;
  const auto lines = detail::read_lines(in);

  for (std::size_t ln = 1; ln <= lines.size(); ++ln) {
    std::string_view line = lines[ln - 1];
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto tokens = detail::split_ws(line);
    if (tokens.empty()) continue;
    const auto& head = tokens.front();

    if (head.text == "U") {
      if (tokens.size() != 3) throw Error(ErrorKind::SyntaxError, "expected 'U <event> <unitUtility>'", ln, 1);
      std::string name(tokens[1].text);
      if (!is_valid_event_token(name)) {
        throw Error(ErrorKind::SyntaxError, "invalid event token '" + name + "'", ln, tokens[1].column);
      }
      const Utility unit = detail::expect_positive(tokens[2].text, ln, tokens[2].column, "unit utility");
      if (!units.emplace(name, unit).second) {
        throw Error(ErrorKind::DuplicateEvent, "unit utility of '" + name + "' declared twice", ln, tokens[1].column);
      }
    } else if (head.text == "T") {
      if (tokens.size() < 3) throw Error(ErrorKind::SyntaxError, "expected 'T <time> <event>:<qty> ...'", ln, 1);
      auto time = detail::parse_int(tokens[1].text);
      if (!time || *time < 0) {
        throw Error(ErrorKind::SyntaxError, "time must be a non-negative integer", ln, tokens[1].column);
      }
      if (!points.empty() && *time <= points.back().time) {
        throw Error(ErrorKind::NonIncreasingTime,
                    "time " + std::to_string(*time) + " does not exceed " + std::to_string(points.back().time), ln,
                    tokens[1].column);
      }
      RawPoint point{*time, {}};
      std::set<std::string_view> seen;
      for (std::size_t k = 2; k < tokens.size(); ++k) {
        const auto& tok = tokens[k];
        auto colon = tok.text.find(':');
        if (colon == std::string_view::npos || colon == 0) {
          throw Error(ErrorKind::SyntaxError, "expected '<event>:<qty>', got '" + std::string(tok.text) + "'", ln,
                      tok.column);
        }
        auto name = tok.text.substr(0, colon);
        if (!is_valid_event_token(name)) {
          throw Error(ErrorKind::SyntaxError, "invalid event token '" + std::string(name) + "'", ln, tok.column);
        }
        const Quantity q = detail::expect_positive(tok.text.substr(colon + 1), ln, tok.column + colon + 1, "quantity");
        if (!seen.insert(name).second) {
          throw Error(ErrorKind::DuplicateEvent, "event '" + std::string(name) + "' repeats in one time point", ln,
                      tok.column);
        }
        point.events.push_back({std::string(name), q, ln, tok.column});
      }
      points.push_back(std::move(point));
    } else {
      throw Error(ErrorKind::SyntaxError, "unknown directive '" + std::string(head.text) + "'", ln, head.column);
    }
  }
  if (points.empty()) throw Error(ErrorKind::SyntaxError, "input has no time points");

  std::vector<std::string> names;
  for (const auto& [name, unit] : units) names.push_back(name);
  auto alphabet = std::make_shared<const Alphabet>(names);
  std::vector<Utility> unit_values(alphabet->size());
  for (const auto& [name, unit] : units) unit_values[alphabet->id(name).value] = unit;
  UtilityTable table(std::move(unit_values));

  std::vector<TimePointEntry> entries;
  entries.reserve(points.size());
  for (const auto& p : points) {
    TimePointEntry entry{p.time, {}};
    for (const auto& ref : p.events) {
      auto id = alphabet->find(ref.name);
      if (!id) {
        throw Error(ErrorKind::UnknownEvent, "event '" + ref.name + "' has no 'U' declaration", ref.line, ref.column);
      }
      entry.events.push_back({*id, ref.quantity, table.unit(*id) * ref.quantity});
    }
    entries.push_back(std::move(entry));
  }
  return NativeDocument{EventSequence(std::move(alphabet), std::move(entries)), std::move(table)};
}

inline NativeDocument parse_native(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_native(in);
}

inline std::string write_native(const EventSequence& s, const UtilityTable& table) {
  std::ostringstream out;
  const auto& alphabet = s.alphabet();
  for (std::uint32_t i = 0; i < alphabet.size(); ++i) {
    out << "U " << alphabet.name(EventId{i}) << ' ' << table.unit(EventId{i}) << '\n';
  }
  for (const auto& entry : s.entries()) {
    out << "T " << entry.time;
    for (const auto& rec : entry.events) out << ' ' << alphabet.name(rec.event) << ':' << rec.quantity;
    out << '\n';
  }
  return out.str();
}

inline std::string write_native(const NativeDocument& doc) { return write_native(doc.sequence, doc.table); }

/// Transaction-with-utilities reader: `<items>:<tu>:<itemUtils>` per line.
/// Line i (1-based, counting data lines only) becomes time point i.
inline TransactionDocument parse_transactions(std::istream& in) {
  struct RawLine {
    std::vector<std::pair<std::string, Utility>> items;
    std::size_t line;
  };
  std::vector<RawLine> raw;
  std::vector<Diagnostic> warnings;
  std::set<std::string> names;
  const auto lines = detail::read_lines(in);

  for (std::size_t ln = 1; ln <= lines.size(); ++ln) {
    std::string_view line = lines[ln - 1];
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    auto first = line.find_first_not_of(" \t");
    if (first == std::string_view::npos) continue;
    if (line[first] == '#' || line[first] == '%' || line[first] == '@') continue;

    auto c1 = line.find(':');
    auto c2 = c1 == std::string_view::npos ? c1 : line.find(':', c1 + 1);
    if (c2 == std::string_view::npos || line.find(':', c2 + 1) != std::string_view::npos) {
      throw Error(ErrorKind::SyntaxError, "expected '<items>:<tu>:<itemUtils>'", ln, 1);
    }
    auto items = detail::split_ws(line.substr(0, c1));
    auto tu_tokens = detail::split_ws(line.substr(c1 + 1, c2 - c1 - 1));
    auto utils = detail::split_ws(line.substr(c2 + 1));
    if (tu_tokens.size() != 1) throw Error(ErrorKind::SyntaxError, "expected one transaction utility", ln, c1 + 2);
    if (items.empty()) throw Error(ErrorKind::SyntaxError, "transaction has no items", ln, 1);
    if (items.size() != utils.size()) {
      throw Error(ErrorKind::CountMismatch,
                  std::to_string(items.size()) + " items but " + std::to_string(utils.size()) + " utilities", ln,
                  c2 + 2);
    }
    auto tu = detail::parse_int(tu_tokens[0].text);
    if (!tu) throw Error(ErrorKind::SyntaxError, "transaction utility must be an integer", ln, c1 + 1 + tu_tokens[0].column);

    RawLine row{{}, ln};
    std::set<std::string_view> seen;
    Utility sum = 0;
    for (std::size_t k = 0; k < items.size(); ++k) {
      std::string name(items[k].text);
      if (!is_valid_event_token(name)) {
        throw Error(ErrorKind::SyntaxError, "invalid item token '" + name + "'", ln, items[k].column);
      }
      if (!seen.insert(items[k].text).second) {
        throw Error(ErrorKind::DuplicateEvent, "item '" + name + "' repeats in one transaction", ln, items[k].column);
      }
      const Utility u = detail::expect_positive(utils[k].text, ln, c2 + 1 + utils[k].column, "item utility");
      sum += u;
      names.insert(name);
      row.items.emplace_back(std::move(name), u);
    }
    if (sum != *tu) {
      warnings.push_back({ln, "item utilities sum to " + std::to_string(sum) + " but transaction utility is " +
                                  std::to_string(*tu)});
    }
    raw.push_back(std::move(row));
  }
  if (raw.empty()) throw Error(ErrorKind::SyntaxError, "input has no transactions");

  auto alphabet = std::make_shared<const Alphabet>(names);
  std::vector<TimePointEntry> entries;
  entries.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    TimePointEntry entry{static_cast<Time>(i + 1), {}};
    for (const auto& [name, u] : raw[i].items) entry.events.push_back({alphabet->id(name), 1, u});
    entries.push_back(std::move(entry));
  }
  return TransactionDocument{EventSequence(std::move(alphabet), std::move(entries)), std::move(warnings)};
}

inline TransactionDocument parse_transactions(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_transactions(in);
}

/// `{B,C}->A->{D,E}`: sets joined by `->`, multi-event sets braced.
inline std::string format_episode(const Episode& episode, const Alphabet& alphabet) {
  std::string out;
  bool first_set = true;
  for (const auto& set : episode.sets()) {
    if (!first_set) out += "->";
    first_set = false;
    if (set.size() == 1) {
      out += alphabet.name(set.front());
      continue;
    }
    out += '{';
    for (std::size_t k = 0; k < set.size(); ++k) {
      if (k) out += ',';
      out += alphabet.name(set[k]);
    }
    out += '}';
  }
  return out;
}

namespace detail {

inline std::vector<std::vector<std::string>> split_episode(std::string_view text) {
  std::vector<std::vector<std::string>> sets;
  std::size_t pos = 0;
  while (true) {
    auto arrow = text.find("->", pos);
    auto part = text.substr(pos, arrow == std::string_view::npos ? std::string_view::npos : arrow - pos);
    auto& set = sets.emplace_back();
    if (!part.empty() && part.front() == '{') {
      if (part.size() < 2 || part.back() != '}') {
        throw Error(ErrorKind::SyntaxError, "unterminated event set in '" + std::string(text) + "'");
      }
      part = part.substr(1, part.size() - 2);
      std::size_t p = 0;
      while (true) {
        auto comma = part.find(',', p);
        set.emplace_back(part.substr(p, comma == std::string_view::npos ? std::string_view::npos : comma - p));
        if (comma == std::string_view::npos) break;
        p = comma + 1;
      }
    } else {
      set.emplace_back(part);
    }
    for (const auto& name : set) {
      if (!is_valid_event_token(name)) {
        throw Error(ErrorKind::SyntaxError, "invalid event token '" + name + "' in '" + std::string(text) + "'");
      }
    }
    if (arrow == std::string_view::npos) break;
    pos = arrow + 2;
  }
  return sets;
}

}  // namespace detail

inline Episode parse_episode(std::string_view text, const Alphabet& alphabet) {
  return canonicalize(alphabet, detail::split_episode(text));
}

inline std::string format_moset(const MoSet& mo) {
  std::string out;
  for (std::size_t i = 0; i < mo.size(); ++i) {
    if (i) out += ';';
    out += '[' + std::to_string(mo[i].start) + ',' + std::to_string(mo[i].end) + ']';
  }
  return out;
}

inline MoSet parse_moset(std::string_view text) {
  MoSet mo;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto close = text.find(']', pos);
    if (text[pos] != '[' || close == std::string_view::npos) {
      throw Error(ErrorKind::SyntaxError, "malformed moSet '" + std::string(text) + "'");
    }
    auto body = text.substr(pos + 1, close - pos - 1);
    auto comma = body.find(',');
    auto a = comma == std::string_view::npos ? std::nullopt : detail::parse_int(body.substr(0, comma));
    auto b = comma == std::string_view::npos ? std::nullopt : detail::parse_int(body.substr(comma + 1));
    if (!a || !b) throw Error(ErrorKind::SyntaxError, "malformed interval in '" + std::string(text) + "'");
    mo.push_back({*a, *b});
    pos = close + 1;
    if (pos < text.size()) {
      if (text[pos] != ';') throw Error(ErrorKind::SyntaxError, "malformed moSet '" + std::string(text) + "'");
      ++pos;
    }
  }
  return mo;
}

/// Orders by descending utility, then by episode text.
inline void sort_hues(std::vector<HueRecord>& records, const Alphabet& alphabet) {
  std::vector<std::pair<std::string, HueRecord>> keyed;
  keyed.reserve(records.size());
  for (auto& r : records) keyed.emplace_back(format_episode(r.episode, alphabet), std::move(r));
  std::stable_sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    if (a.second.utility != b.second.utility) return a.second.utility > b.second.utility;
    return a.first < b.first;
  });
  records.clear();
  for (auto& [key, r] : keyed) records.push_back(std::move(r));
}

inline constexpr std::string_view kHueTsvHeader = "episode\tutility\tnumMinOccs\tmoSet";

inline std::string write_hues(const std::vector<HueRecord>& records, const Alphabet& alphabet, HueFormat format) {
  if (format == HueFormat::json) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& r : records) {
      nlohmann::ordered_json row;
      row["episode"] = format_episode(r.episode, alphabet);
      row["utility"] = r.utility;
      row["numMinOccs"] = r.mo_set.size();
      auto mo = nlohmann::ordered_json::array();
      for (const auto& iv : r.mo_set) mo.push_back({iv.start, iv.end});
      row["moSet"] = std::move(mo);
      arr.push_back(std::move(row));
    }
    return arr.dump(2) + "\n";
  }
  std::string out(kHueTsvHeader);
  out += '\n';
  for (const auto& r : records) {
    out += format_episode(r.episode, alphabet);
    out += '\t' + std::to_string(r.utility) + '\t' + std::to_string(r.mo_set.size()) + '\t' + format_moset(r.mo_set) +
           '\n';
  }
  return out;
}

namespace detail {

struct RawHue {
  std::string episode;
  Utility utility;
  MoSet mo_set;
};

inline bool looks_like_json(std::string_view text) {
  auto first = text.find_first_not_of(" \t\r\n");
  return first != std::string_view::npos && text[first] == '[';
}

inline std::vector<RawHue> read_raw_hues(std::string_view text) {
  std::vector<RawHue> out;
  if (looks_like_json(text)) {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::SyntaxError, std::string("invalid JSON: ") + e.what());
    }
    for (const auto& row : doc) {
      try {
        RawHue r{row.at("episode").get<std::string>(), row.at("utility").get<Utility>(), {}};
        for (const auto& iv : row.at("moSet")) r.mo_set.push_back({iv.at(0).get<Time>(), iv.at(1).get<Time>()});
        if (row.at("numMinOccs").get<std::size_t>() != r.mo_set.size()) {
          throw Error(ErrorKind::CountMismatch, "numMinOccs disagrees with moSet for '" + r.episode + "'");
        }
        out.push_back(std::move(r));
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::SyntaxError, std::string("malformed HUE record: ") + e.what());
      }
    }
    return out;
  }

  std::istringstream in{std::string(text)};
  const auto lines = read_lines(in);
  std::size_t ln = 0;
  bool header_seen = false;
  for (const auto& raw_line : lines) {
    ++ln;
    std::string_view line = raw_line;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != kHueTsvHeader) throw Error(ErrorKind::SyntaxError, "missing HUE TSV header", ln, 1);
      header_seen = true;
      continue;
    }
    std::vector<std::string_view> cols;
    std::size_t p = 0;
    while (true) {
      auto tab = line.find('\t', p);
      cols.push_back(line.substr(p, tab == std::string_view::npos ? std::string_view::npos : tab - p));
      if (tab == std::string_view::npos) break;
      p = tab + 1;
    }
    if (cols.size() != 4) throw Error(ErrorKind::SyntaxError, "expected 4 tab-separated columns", ln, 1);
    auto utility = parse_int(cols[1]);
    auto count = parse_int(cols[2]);
    if (!utility || !count) throw Error(ErrorKind::SyntaxError, "utility and numMinOccs must be integers", ln, 1);
    RawHue r{std::string(cols[0]), *utility, parse_moset(cols[3])};
    if (static_cast<std::size_t>(*count) != r.mo_set.size()) {
      throw Error(ErrorKind::CountMismatch, "numMinOccs disagrees with moSet", ln, 1);
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace detail

/// Event tokens referenced by the episodes of a TSV or JSON result file.
inline std::vector<std::string> hue_event_names(std::string_view text) {
  std::set<std::string> names;
  for (const auto& r : detail::read_raw_hues(text)) {
    for (const auto& set : detail::split_episode(r.episode)) names.insert(set.begin(), set.end());
  }
  return {names.begin(), names.end()};
}

/// Reads a TSV or JSON result file (detected by content).
inline std::vector<HueRecord> read_hues(std::string_view text, const Alphabet& alphabet) {
  std::vector<HueRecord> out;
  for (auto& r : detail::read_raw_hues(text)) {
    out.push_back({parse_episode(r.episode, alphabet), r.utility, std::move(r.mo_set)});
  }
  return out;
}

inline DiffReport diff(const std::vector<HueRecord>& a, const std::vector<HueRecord>& b) {
  std::map<Episode, const HueRecord*> in_a, in_b;
  for (const auto& r : a) in_a.emplace(r.episode, &r);
  for (const auto& r : b) in_b.emplace(r.episode, &r);
  DiffReport report;
  for (const auto& r : a) {
    auto it = in_b.find(r.episode);
    if (it == in_b.end()) {
      report.missing.push_back(r);
    } else if (it->second->utility != r.utility) {
      report.utility_mismatch.push_back({r.episode, r.utility, it->second->utility});
    }
  }
  for (const auto& r : b) {
    if (!in_a.contains(r.episode)) report.extra.push_back(r);
  }
  return report;
}

/// Empty string when the two result sets agree.
inline std::string format_diff(const DiffReport& report, const Alphabet& alphabet) {
  if (report.empty()) return {};
  std::ostringstream out;
  out << "missing\t" << report.missing.size() << "\textra\t" << report.extra.size() << "\tutilityMismatch\t"
      << report.utility_mismatch.size() << '\n';
  for (const auto& r : report.missing) out << "-\t" << format_episode(r.episode, alphabet) << '\t' << r.utility << '\n';
  for (const auto& r : report.extra) out << "+\t" << format_episode(r.episode, alphabet) << '\t' << r.utility << '\n';
  for (const auto& m : report.utility_mismatch) {
    out << "~\t" << format_episode(m.episode, alphabet) << '\t' << m.utility_a << '\t' << m.utility_b << '\n';
  }
  return out.str();
}

}  // namespace umepi

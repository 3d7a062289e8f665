#pragma once

#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "umepi/codec.hpp"
#include "umepi/datagen.hpp"
#include "umepi/miner.hpp"
#include "umepi/oracle.hpp"

namespace umepi::cli {

enum ExitCode : int { kSuccess = 0, kRuntimeFailure = 1, kUsageError = 2 };

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error(ErrorKind::Io, "failed reading '" + path + "'");
  return buf.str();
}

inline void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorKind::Io, "cannot write '" + path + "'");
  file << text;
  if (!file) throw Error(ErrorKind::Io, "failed writing '" + path + "'");
}

inline EventSequence load_sequence(const std::string& path, const std::string& format, std::ostream& err) {
  const auto text = read_file(path);
  if (format == "tx") {
    auto doc = parse_transactions(text);
    for (const auto& w : doc.warnings) err << "warning: " << path << ":" << w.line << ": " << w.message << '\n';
    return std::move(doc.sequence);
  }
  return std::move(parse_native(text).sequence);
}

struct InputOptions {
  std::string input;
  std::string format = "useq";
  Time mtd = 0;
  std::string min_util;
  Utility min_util_abs = -1;
  std::string out;
  std::string emit = "tsv";
  std::size_t max_length = 0;

  void attach(CLI::App& cmd, bool with_threshold) {
    cmd.add_option("--input", input, "Input event sequence")->required();
    cmd.add_option("--format", format, "Input format")->check(CLI::IsMember({"useq", "tx"}));
    if (!with_threshold) return;
    cmd.add_option("--mtd", mtd, "Maximum time duration")->required()->check(CLI::NonNegativeNumber);
    auto* ratio = cmd.add_option("--min-util", min_util, "Threshold as a ratio of total utility, e.g. 0.5");
    auto* abs = cmd.add_option("--min-util-abs", min_util_abs, "Absolute utility threshold")
                    ->check(CLI::NonNegativeNumber);
    ratio->excludes(abs);
    abs->excludes(ratio);
    cmd.add_option("--out", out, "Output file (default stdout)");
    cmd.add_option("--emit", emit, "Output format")->check(CLI::IsMember({"tsv", "json"}));
    cmd.add_option("--max-length", max_length, "Cap on episode length (0 = unbounded)");
  }

  MiningConfig base_config() const {
    MiningConfig config;
    config.mtd = mtd;
    if (!min_util.empty()) {
      config.min_util = MinUtil::from_decimal(min_util);
    } else if (min_util_abs >= 0) {
      config.min_util = MinUtil::absolute(min_util_abs);
    } else {
      throw CLI::RequiredError("--min-util or --min-util-abs");
    }
    if (max_length > 0) config.max_episode_length = max_length;
    return config;
  }

  HueFormat hue_format() const { return emit == "json" ? HueFormat::json : HueFormat::tsv; }
};

inline std::vector<HueRecord> read_result_pair(const std::string& a_text, const std::string& b_text,
                                               std::vector<HueRecord>& b, std::shared_ptr<const Alphabet>& alphabet) {
  auto names = hue_event_names(a_text);
  auto more = hue_event_names(b_text);
  names.insert(names.end(), more.begin(), more.end());
  alphabet = std::make_shared<const Alphabet>(names);
  b = read_hues(b_text, *alphabet);
  return read_hues(a_text, *alphabet);
}

}  // namespace detail

/// Runs one CLI invocation; `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"High-utility episode mining over complex event sequences", "umepi"};
  app.require_subcommand(1);

  detail::InputOptions mine_opts;
  std::string ewu = "opt2", order = "ewu-asc", mode = "strict";
  bool print_stats = false, no_timing = false;
  unsigned threads = 1;
  auto* mine_cmd = app.add_subcommand("mine", "Mine high-utility episodes");
  mine_opts.attach(*mine_cmd, true);
  mine_cmd->add_option("--ewu", ewu, "EWU upper bound")->check(CLI::IsMember({"baseline", "opt1", "opt2"}));
  mine_cmd->add_option("--order", order, "Processing order")
      ->check(CLI::IsMember({"occ", "lexi", "ewu-asc", "ewu-desc"}));
  mine_cmd->add_option("--mode", mode, "Simultaneous-extension mode")->check(CLI::IsMember({"paper", "strict"}));
  mine_cmd->add_flag("--stats", print_stats, "Print traversal statistics to stderr");
  mine_cmd->add_flag("--no-timing", no_timing, "Omit the elapsed-time statistic");
  mine_cmd->add_option("--threads", threads, "Worker threads for subtree exploration")->check(CLI::PositiveNumber);

  detail::InputOptions oracle_opts;
  OracleBudget budget;
  auto* oracle_cmd = app.add_subcommand("oracle", "Exhaustive reference mining (small inputs only)");
  oracle_opts.attach(*oracle_cmd, true);
  oracle_cmd->add_option("--budget-time-points", budget.max_time_points, "Largest admissible sequence");
  oracle_cmd->add_option("--budget-alphabet", budget.max_alphabet, "Largest admissible alphabet");
  oracle_cmd->add_option("--budget-length", budget.max_episode_length, "Longest admissible episode");

  std::string diff_a, diff_b, diff_out;
  auto* diff_cmd = app.add_subcommand("diff", "Compare two result files");
  diff_cmd->add_option("first", diff_a, "Reference result file")->required();
  diff_cmd->add_option("second", diff_b, "Result file to compare")->required();
  diff_cmd->add_option("--out", diff_out, "Report file (default stdout)");

  GenConfig gen;
  std::string gen_out;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic event sequence");
  gen_cmd->add_option("--time-points", gen.num_time_points, "Number of time points");
  gen_cmd->add_option("--alphabet", gen.alphabet_size, "Number of event types");
  gen_cmd->add_option("--min-events", gen.events_per_point_min, "Minimum events per time point");
  gen_cmd->add_option("--max-events", gen.events_per_point_max, "Maximum events per time point");
  gen_cmd->add_option("--min-qty", gen.quantity_min, "Minimum quantity");
  gen_cmd->add_option("--max-qty", gen.quantity_max, "Maximum quantity");
  gen_cmd->add_option("--min-unit", gen.unit_utility_min, "Minimum unit utility");
  gen_cmd->add_option("--max-unit", gen.unit_utility_max, "Maximum unit utility");
  gen_cmd->add_option("--lognormal-location", gen.lognormal_location, "Log-normal location");
  gen_cmd->add_option("--lognormal-scale", gen.lognormal_scale, "Log-normal scale");
  gen_cmd->add_option("--seed", gen.seed, "Random seed");
  gen_cmd->add_option("--out", gen_out, "Output file (default stdout)");

  detail::InputOptions stats_opts;
  auto* stats_cmd = app.add_subcommand("stats", "Summarise an event sequence");
  stats_opts.attach(*stats_cmd, false);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    if (mine_cmd->parsed()) {
      auto config = mine_opts.base_config();
      static const std::map<std::string, EwuVariant> variants{
          {"baseline", EwuVariant::baseline}, {"opt1", EwuVariant::opt1}, {"opt2", EwuVariant::opt2}};
      static const std::map<std::string, OrderKind> orders{{"occ", OrderKind::occurrence},
                                                           {"lexi", OrderKind::lexicographic},
                                                           {"ewu-asc", OrderKind::ewu_ascending},
                                                           {"ewu-desc", OrderKind::ewu_descending}};
      config.ewu = variants.at(ewu);
      config.order = orders.at(order);
      config.mode = mode == "paper" ? ExtensionMode::paper : ExtensionMode::strict;
      config.threads = threads;
      const auto s = detail::load_sequence(mine_opts.input, mine_opts.format, err);
      auto result = mine(s, config);
      detail::emit(write_hues(result.hues, s.alphabet(), mine_opts.hue_format()), mine_opts.out, out);
      if (print_stats) {
        err << "hues\t" << result.hues.size() << '\n'
            << "candidatesVisited\t" << result.stats.candidates_visited << '\n'
            << "prunedByEwu\t" << result.stats.pruned_by_ewu << '\n'
            << "maxDepth\t" << result.stats.max_depth << '\n';
        if (!no_timing) {
          err << "elapsedMs\t"
              << std::chrono::duration<double, std::milli>(result.stats.elapsed).count() << '\n';
        }
      }
    } else if (oracle_cmd->parsed()) {
      auto config = oracle_opts.base_config();
      const auto s = detail::load_sequence(oracle_opts.input, oracle_opts.format, err);
      auto hues = oracle_mine(s, config, budget);
      detail::emit(write_hues(hues, s.alphabet(), oracle_opts.hue_format()), oracle_opts.out, out);
    } else if (diff_cmd->parsed()) {
      const auto a_text = detail::read_file(diff_a);
      const auto b_text = detail::read_file(diff_b);
      std::vector<HueRecord> b;
      std::shared_ptr<const Alphabet> alphabet;
      auto a = detail::read_result_pair(a_text, b_text, b, alphabet);
      detail::emit(format_diff(diff(a, b), *alphabet), diff_out, out);
    } else if (gen_cmd->parsed()) {
      detail::emit(write_native(generate(gen)), gen_out, out);
    } else if (stats_cmd->parsed()) {
      const auto s = detail::load_sequence(stats_opts.input, stats_opts.format, err);
      std::size_t used = 0;
      for (std::uint32_t i = 0; i < s.alphabet().size(); ++i) used += s.positions(EventId{i}).empty() ? 0 : 1;
      out << "timePoints\t" << s.size() << '\n'
          << "alphabet\t" << used << '\n'
          << "totalUtility\t" << s.total_utility() << '\n';
    }
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kUsageError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return (e.kind() == ErrorKind::BudgetExceeded || e.kind() == ErrorKind::Io) ? kRuntimeFailure : kUsageError;
  }
  return kSuccess;
}

}  // namespace umepi::cli

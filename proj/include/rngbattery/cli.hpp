// Copyright 2026 The rngbattery Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RNGBATTERY_CLI_HPP_
#define RNGBATTERY_CLI_HPP_

// Command-line front end:
//
//   rngbattery test (--stdin32|--stdin64|--stdin | -f PATH [--format text]
//                    | -g ID [--seed S]) (-a | -d TEST...) [size] [options]
//   rngbattery emit -g ID [--seed S] [--w32|--w64] [--bytes N]
//   rngbattery list
//
// Exit status: report status 0/1/2 for `test`, 64 for usage errors, 66 when
// input cannot be read or decoded.

#include <csignal>
#include <cerrno>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rngbattery/battery.hpp"
#include "rngbattery/errors.hpp"
#include "rngbattery/generators.hpp"
#include "rngbattery/ingest.hpp"
#include "rngbattery/report.hpp"

namespace rngbattery {

inline constexpr int kExitUsage = 64;
inline constexpr int kExitIo = 66;

struct SizePreset {
  std::string_view name;
  std::uint64_t bytes;
};

// Decimal units: 1 MB = 10^6 bytes.
inline constexpr std::array<SizePreset, 6> kSizePresets{{
    {"tiny", 10'000'000ull},
    {"small", 100'000'000ull},
    {"standard", 1'000'000'000ull},
    {"big", 10'000'000'000ull},
    {"huge", 100'000'000'000ull},
    {"tera", 1'000'000'000'000ull},
}};
inline constexpr std::uint64_t kDefaultBudgetBytes = 1'000'000'000ull;

enum class Subcommand { kTest, kEmit, kList };
enum class InputKind { kStdin, kBinaryFile, kTextFile, kGenerator };

struct CliInvocation {
  Subcommand subcommand = Subcommand::kTest;
  InputKind input = InputKind::kStdin;
  std::string path;
  std::string generator_id;
  std::uint64_t seed = 5489;
  std::optional<LcgParams> lcg;
  BinaryMode binary_mode = BinaryMode::kAuto;
  Width width = Width::k64;
  std::uint64_t budget_bytes = kDefaultBudgetBytes;  // emit: 0 = unbounded
  std::vector<TestId> tests;
  RewindPolicy rewind = RewindPolicy::kStopWithWarning;
  Verbosity verbosity = Verbosity::kAnomaliesOnly;
  ReportFormat format = ReportFormat::kText;
  std::uint64_t second_level_reps = 0;
};

// Thrown for --help; carries the text to print.
struct HelpRequested {
  std::string text;
};

namespace detail {

[[noreturn]] inline void Usage(const std::string& why) {
  throw Error(ErrorCode::kUsageError, why);
}

inline LcgParams ParseLcgParams(const std::string& text) {
  std::vector<std::uint64_t> parts;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find_first_of(":,", start);
    if (end == std::string::npos) end = text.size();
    const std::string piece = text.substr(start, end - start);
    try {
      std::size_t used = 0;
      parts.push_back(std::stoull(piece, &used, 0));
      if (used != piece.size()) Usage("bad --lcg value '" + text + "'");
    } catch (const std::logic_error&) {
      Usage("bad --lcg value '" + text + "'");
    }
    start = end + 1;
  }
  if (parts.size() != 3) Usage("--lcg expects a:c:m");
  return {parts[0], parts[1], parts[2]};
}

inline const GeneratorPreset& RequirePreset(const std::string& id) {
  const GeneratorPreset* preset = FindGeneratorPreset(id);
  if (preset == nullptr) Usage("unknown generator '" + id + "' (see `list`)");
  return *preset;
}

}  // namespace detail

inline CliInvocation ParseArgs(const std::vector<std::string>& args) {
  CLI::App app{"Statistical test battery for pseudorandom word streams",
               "rngbattery"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for all subcommands");

  CliInvocation inv;

  // test ------------------------------------------------------------------
  CLI::App* test = app.add_subcommand("test", "Run the battery on a stream");
  bool stdin32 = false, stdin64 = false, stdin_auto = false;
  std::string file, format = "binary", generator;
  bool w32 = false, w64 = false;
  bool all = false;
  std::vector<std::string> selected;
  std::vector<bool> preset_flags(kSizePresets.size(), false);
  std::optional<std::uint64_t> bytes;
  bool rewind = false, no_rewind = false, full = false, json = false;
  std::optional<int> print_level;
  std::string lcg_text;
  std::uint64_t seed = 5489;
  std::uint64_t second_level = 0;

  test->add_flag("--stdin32", stdin32, "Read stdin as 32-bit little-endian words");
  test->add_flag("--stdin64", stdin64, "Read stdin as 64-bit little-endian words");
  test->add_flag("--stdin", stdin_auto, "Read stdin, width chosen automatically");
  test->add_option("-f,--file", file, "Read words from a file");
  test->add_option("--format", format, "File format")
      ->check(CLI::IsMember({"binary", "text"}));
  test->add_option("-g,--generator", generator, "Test a built-in generator");
  test->add_option("--seed", seed, "Generator seed");
  test->add_option("--lcg", lcg_text, "LCG constants a:c:m for -g lcg");
  test->add_flag("--w32", w32, "32-bit words (generator or binary file)");
  test->add_flag("--w64", w64, "64-bit words (generator or binary file)");
  test->add_flag("-a,--all", all, "Apply all tests");
  test->add_option("-d,--test", selected, "Select a test by name or index")
      ->allow_extra_args(false);
  for (std::size_t i = 0; i < kSizePresets.size(); ++i) {
    test->add_flag("--" + std::string(kSizePresets[i].name),
                   [&preset_flags, i](std::int64_t) { preset_flags[i] = true; },
                   std::to_string(kSizePresets[i].bytes) + " bytes");
  }
  test->add_option("--bytes", bytes, "Explicit byte budget");
  test->add_flag("--rewind", rewind, "Restart a short file from its beginning");
  test->add_flag("--no-rewind", no_rewind, "Stop at end of input (default)");
  test->add_flag("--full", full, "Print every result, not just anomalies");
  test->add_option("-p", print_level, "-p1 prints every result");
  test->add_flag("--json", json, "Emit a JSON report");
  test->add_option("--second-level", second_level,
                   "Repeat each test N times and KS-test the p-values");

  // emit ------------------------------------------------------------------
  CLI::App* emit = app.add_subcommand("emit", "Write generator words to stdout");
  std::string emit_generator;
  std::uint64_t emit_seed = 5489;
  bool emit_w32 = false, emit_w64 = false;
  std::optional<std::uint64_t> emit_bytes;
  std::string emit_lcg;
  emit->add_option("-g,--generator", emit_generator, "Generator id")->required();
  emit->add_option("--seed", emit_seed, "Generator seed");
  emit->add_option("--lcg", emit_lcg, "LCG constants a:c:m for -g lcg");
  emit->add_flag("--w32", emit_w32, "32-bit words");
  emit->add_flag("--w64", emit_w64, "64-bit words (default)");
  emit->add_option("--bytes", emit_bytes, "Stop after N bytes (default: until the pipe closes)");

  // list ------------------------------------------------------------------
  CLI::App* list = app.add_subcommand("list", "List tests and generators");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested{app.help()};
  } catch (const CLI::CallForAllHelp&) {
    throw HelpRequested{app.help("", CLI::AppFormatMode::All)};
  } catch (const CLI::ParseError& e) {
    detail::Usage(e.what());
  }

  if (list->parsed()) {
    inv.subcommand = Subcommand::kList;
    return inv;
  }

  if (emit->parsed()) {
    inv.subcommand = Subcommand::kEmit;
    const GeneratorPreset& preset = detail::RequirePreset(emit_generator);
    inv.generator_id = emit_generator;
    inv.seed = emit_seed;
    if (!emit_lcg.empty()) {
      if (preset.algorithm != Algorithm::kLcg) {
        detail::Usage("--lcg only applies to LCG generators");
      }
      inv.lcg = detail::ParseLcgParams(emit_lcg);
    }
    if (emit_w32 && emit_w64) detail::Usage("--w32 and --w64 are exclusive");
    inv.width = emit_w32 ? Width::k32 : Width::k64;
    inv.budget_bytes = emit_bytes.value_or(0);
    if (emit_bytes && *emit_bytes % WordBytes(inv.width) != 0) {
      detail::Usage("--bytes must be a multiple of the word size");
    }
    if (emit_bytes && *emit_bytes == 0) inv.budget_bytes = 0;
    inv.input = InputKind::kGenerator;
    return inv;
  }

  (void)test;
  inv.subcommand = Subcommand::kTest;
  const int sources = int{stdin32} + int{stdin64} + int{stdin_auto} +
                      int{!file.empty()} + int{!generator.empty()};
  if (sources != 1) {
    detail::Usage("choose exactly one input: --stdin32, --stdin64, --stdin, -f or -g");
  }
  if (w32 && w64) detail::Usage("--w32 and --w64 are exclusive");
  if (stdin32 || stdin64 || stdin_auto) {
    if (w32 || w64) detail::Usage("use --stdin32/--stdin64 to set the stdin width");
    inv.input = InputKind::kStdin;
    inv.binary_mode = stdin32   ? BinaryMode::k32
                      : stdin64 ? BinaryMode::k64
                                : BinaryMode::kAuto;
  } else if (!file.empty()) {
    inv.path = file;
    if (format == "text") {
      if (w32 || w64) detail::Usage("a text file's width comes from its numbit header");
      inv.input = InputKind::kTextFile;
    } else {
      inv.input = InputKind::kBinaryFile;
      inv.binary_mode = w32 ? BinaryMode::k32 : w64 ? BinaryMode::k64 : BinaryMode::kAuto;
    }
  } else {
    const GeneratorPreset& preset = detail::RequirePreset(generator);
    inv.input = InputKind::kGenerator;
    inv.generator_id = generator;
    inv.width = w32 ? Width::k32 : Width::k64;
    if (!lcg_text.empty()) {
      if (preset.algorithm != Algorithm::kLcg) {
        detail::Usage("--lcg only applies to LCG generators");
      }
      inv.lcg = detail::ParseLcgParams(lcg_text);
    }
  }
  inv.seed = seed;
  if (inv.input != InputKind::kGenerator && !lcg_text.empty()) {
    detail::Usage("--lcg requires -g");
  }

  if (all == !selected.empty()) detail::Usage("choose -a or one or more -d TEST");
  if (all) {
    inv.tests.assign(kTestOrder.begin(), kTestOrder.end());
  } else {
    for (const auto& name : selected) {
      const auto id = ParseTestId(name);
      if (!id) detail::Usage("unknown test '" + name + "' (see `list`)");
      if (std::find(inv.tests.begin(), inv.tests.end(), *id) == inv.tests.end()) {
        inv.tests.push_back(*id);
      }
    }
  }

  int size_choices = bytes ? 1 : 0;
  for (std::size_t i = 0; i < kSizePresets.size(); ++i) {
    if (preset_flags[i]) {
      ++size_choices;
      inv.budget_bytes = kSizePresets[i].bytes;
    }
  }
  if (size_choices > 1) detail::Usage("choose at most one size preset or --bytes");
  if (bytes) {
    if (*bytes == 0) detail::Usage("--bytes must be positive");
    inv.budget_bytes = *bytes;
  }

  if (rewind && no_rewind) detail::Usage("--rewind and --no-rewind are exclusive");
  inv.rewind = rewind ? RewindPolicy::kRewind : RewindPolicy::kStopWithWarning;
  if (print_level && *print_level != 0 && *print_level != 1) {
    detail::Usage("-p takes 0 or 1");
  }
  inv.verbosity = (full || print_level.value_or(0) == 1) ? Verbosity::kFull
                                                         : Verbosity::kAnomaliesOnly;
  inv.format = json ? ReportFormat::kJson : ReportFormat::kText;
  inv.second_level_reps = second_level;
  return inv;
}

inline CliInvocation ParseArgs(int argc, const char* const* argv) {
  return ParseArgs(std::vector<std::string>(argv + 1, argv + argc));
}

inline std::string ListText() {
  std::string out = "tests (run order):\n";
  for (std::size_t i = 0; i < kTestOrder.size(); ++i) {
    out += "  " + std::to_string(i) + "  " + std::string(TestName(kTestOrder[i])) +
           "  " + std::string(TestDescription(kTestOrder[i])) + "\n";
  }
  out += "generators:\n";
  for (const auto& g : kGeneratorPresets) {
    out += "  " + std::string(g.id) + "  " + std::string(g.description) + "\n";
  }
  out += "size presets:\n";
  for (const auto& s : kSizePresets) {
    out += "  --" + std::string(s.name) + "  " + std::to_string(s.bytes) + " bytes\n";
  }
  return out;
}

inline WordStream OpenInput(const CliInvocation& inv, std::FILE* in) {
  switch (inv.input) {
    case InputKind::kStdin:
      return OpenBinary(FileByteSource::Borrow(in), inv.binary_mode,
                        inv.budget_bytes, inv.rewind, "stdin");
    case InputKind::kBinaryFile:
      return OpenBinary(FileByteSource::Open(inv.path), inv.binary_mode,
                        inv.budget_bytes, inv.rewind, inv.path);
    case InputKind::kTextFile: {
      auto file = std::make_unique<std::ifstream>(inv.path, std::ios::binary);
      if (!*file) throw Error(ErrorCode::kIoError, "cannot open " + inv.path);
      return std::move(ParseText(std::move(file), inv.budget_bytes, inv.rewind,
                                 inv.path)
                           .stream);
    }
    case InputKind::kGenerator: {
      const GeneratorPreset& preset = detail::RequirePreset(inv.generator_id);
      return OpenGenerator(Generator::FromPreset(preset, inv.seed, inv.lcg),
                           inv.width, inv.budget_bytes, inv.generator_id);
    }
  }
  throw Error(ErrorCode::kUsageError, "no input");
}

inline int RunTest(const CliInvocation& inv, std::FILE* in, std::FILE* out,
                   std::FILE* err) {
  WordStream stream = OpenInput(inv, in);
  TestConfig cfg;
  cfg.second_level_reps = inv.second_level_reps;
  const BatteryReport report = RunBattery(stream, cfg, inv.tests);
  for (const auto& w : stream.warnings()) {
    std::fprintf(err, "rngbattery: warning: %s\n", w.message.c_str());
  }
  const std::string text = Render(report, inv.format, inv.verbosity);
  std::fwrite(text.data(), 1, text.size(), out);
  std::fflush(out);
  return ExitCode(report);
}

// A closed downstream pipe ends emission normally.
inline int RunEmit(const CliInvocation& inv, std::FILE* out) {
  const GeneratorPreset& preset = detail::RequirePreset(inv.generator_id);
  Generator gen = Generator::FromPreset(preset, inv.seed, inv.lcg);
  bool broken_pipe = false;
  int write_errno = 0;
  auto sink = [&](std::span<const std::byte> chunk) {
    if (std::fwrite(chunk.data(), 1, chunk.size(), out) == chunk.size()) return true;
    write_errno = errno;
    broken_pipe = write_errno == EPIPE;
    return false;
  };
  try {
    if (inv.budget_bytes != 0) {
      EmitStream(gen, inv.width, inv.budget_bytes, sink);
    } else {
      constexpr std::uint64_t kChunk = std::uint64_t{1} << 20;
      for (;;) EmitStream(gen, inv.width, kChunk, sink);
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kSinkError && broken_pipe) return 0;
    throw Error(ErrorCode::kIoError,
                std::string("write failed: ") + std::strerror(write_errno));
  }
  if (std::fflush(out) != 0) {
    if (errno == EPIPE) return 0;
    throw Error(ErrorCode::kIoError, std::string("write failed: ") + std::strerror(errno));
  }
  return 0;
}

inline int ExitCodeForError(const Error& e) {
  switch (e.code()) {
    case ErrorCode::kUsageError:
    case ErrorCode::kInvalidParams:
    case ErrorCode::kDegenerateSeed:
      return kExitUsage;
    default:
      return kExitIo;
  }
}

// Full program: parse, run, map errors to exit statuses.
inline int Main(const std::vector<std::string>& args, std::FILE* in,
                std::FILE* out, std::FILE* err) {
  try {
    const CliInvocation inv = ParseArgs(args);
    switch (inv.subcommand) {
      case Subcommand::kList: {
        const std::string text = ListText();
        std::fwrite(text.data(), 1, text.size(), out);
        return 0;
      }
      case Subcommand::kEmit:
        return RunEmit(inv, out);
      case Subcommand::kTest:
        return RunTest(inv, in, out, err);
    }
  } catch (const HelpRequested& help) {
    std::fputs(help.text.c_str(), out);
    return 0;
  } catch (const Error& e) {
    std::fprintf(err, "rngbattery: %s\n", e.what());
    return ExitCodeForError(e);
  }
  return kExitUsage;
}

}  // namespace rngbattery

#endif  // RNGBATTERY_CLI_HPP_

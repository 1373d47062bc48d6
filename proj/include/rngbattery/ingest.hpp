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

#ifndef RNGBATTERY_INGEST_HPP_
#define RNGBATTERY_INGEST_HPP_

// Input side of the battery: turns raw little-endian binary data, the
// dieharder-style text format, or an internal generator into a WordStream.
//
// Binary input is a bare concatenation of 32- or 64-bit little-endian words
// with no framing. Text input is
//
//   type: d
//   count: <decimal>
//   numbit: <32|64>
//   <decimal>
//   ...
//
// Header keys may come in any order and any case; LF or CRLF line endings
// are accepted. Output always uses the order above with LF.

#include <sys/stat.h>

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <istream>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rngbattery/errors.hpp"
#include "rngbattery/generators.hpp"

namespace rngbattery {

enum class SourceKind { kPipe, kBinaryFile, kTextFile, kInternalGenerator };
enum class RewindPolicy { kStopWithWarning, kRewind };
enum class BinaryMode { k32, k64, kAuto };

constexpr std::string_view SourceKindName(SourceKind kind) {
  switch (kind) {
    case SourceKind::kPipe: return "pipe";
    case SourceKind::kBinaryFile: return "binary-file";
    case SourceKind::kTextFile: return "text-file";
    case SourceKind::kInternalGenerator: return "internal-generator";
  }
  return "unknown";
}

struct IngestWarning {
  enum class Kind { kTruncatedWord, kRewind, kCannotRewind, kCountMismatch };
  Kind kind;
  std::string message;
};

// ---------------------------------------------------------------------------
// Byte sources

class ByteSource {
 public:
  virtual ~ByteSource() = default;
  // Reads up to out.size() bytes; returns 0 only at end of input.
  virtual std::size_t Read(std::span<std::byte> out) = 0;
  virtual bool Rewind() = 0;
  // Set when the source is a regular file of known length.
  virtual std::optional<std::uint64_t> RegularFileSize() const = 0;
};

class FileByteSource : public ByteSource {
 public:
  static std::unique_ptr<FileByteSource> Open(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (f == nullptr) {
      throw Error(ErrorCode::kIoError,
                  "cannot open " + path + ": " + std::strerror(errno));
    }
    return std::unique_ptr<FileByteSource>(new FileByteSource(f, true));
  }

  // Borrows `f` (typically stdin); the caller keeps ownership.
  static std::unique_ptr<FileByteSource> Borrow(std::FILE* f) {
    return std::unique_ptr<FileByteSource>(new FileByteSource(f, false));
  }

  ~FileByteSource() override {
    if (owned_) std::fclose(file_);
  }
  FileByteSource(const FileByteSource&) = delete;
  FileByteSource& operator=(const FileByteSource&) = delete;

  std::size_t Read(std::span<std::byte> out) override {
    std::size_t total = 0;
    while (total < out.size()) {
      const std::size_t n =
          std::fread(out.data() + total, 1, out.size() - total, file_);
      total += n;
      if (n == 0) {
        if (std::ferror(file_)) {
          throw Error(ErrorCode::kIoError,
                      std::string("read failed: ") + std::strerror(errno));
        }
        break;
      }
    }
    return total;
  }

  bool Rewind() override {
    if (!size_) return false;
    std::clearerr(file_);
    return std::fseek(file_, 0, SEEK_SET) == 0;
  }

  std::optional<std::uint64_t> RegularFileSize() const override {
    return size_;
  }

 private:
  FileByteSource(std::FILE* f, bool owned) : file_(f), owned_(owned) {
    struct stat st {};
    if (::fstat(::fileno(f), &st) == 0 && S_ISREG(st.st_mode)) {
      size_ = static_cast<std::uint64_t>(st.st_size);
    }
  }

  std::FILE* file_;
  bool owned_;
  std::optional<std::uint64_t> size_;
};

class MemoryByteSource : public ByteSource {
 public:
  // `as_regular_file` makes the buffer behave like a seekable file of known
  // size; otherwise it behaves like a pipe.
  explicit MemoryByteSource(std::vector<std::byte> bytes,
                            bool as_regular_file = false)
      : bytes_(std::move(bytes)), regular_(as_regular_file) {}

  std::size_t Read(std::span<std::byte> out) override {
    const std::size_t n = std::min(out.size(), bytes_.size() - pos_);
    std::copy_n(bytes_.begin() + static_cast<std::ptrdiff_t>(pos_), n,
                out.begin());
    pos_ += n;
    return n;
  }

  bool Rewind() override {
    if (!regular_) return false;
    pos_ = 0;
    return true;
  }

  std::optional<std::uint64_t> RegularFileSize() const override {
    if (!regular_) return std::nullopt;
    return bytes_.size();
  }

 private:
  std::vector<std::byte> bytes_;
  std::size_t pos_ = 0;
  bool regular_;
};

// ---------------------------------------------------------------------------
// Word sources

class WordSource {
 public:
  virtual ~WordSource() = default;
  virtual std::size_t Read(std::span<std::uint64_t> out) = 0;
  virtual bool Rewind() = 0;
  virtual Width width() const = 0;
  // Warnings produced since the last call.
  std::vector<IngestWarning> TakeWarnings() { return std::exchange(pending_, {}); }

 protected:
  void Warn(IngestWarning::Kind kind, std::string message) {
    pending_.push_back({kind, std::move(message)});
  }

 private:
  std::vector<IngestWarning> pending_;
};

inline std::uint64_t LoadLittleEndian(const std::byte* in, Width width) {
  std::uint64_t word = 0;
  for (std::size_t i = 0; i < WordBytes(width); ++i) {
    word |= static_cast<std::uint64_t>(in[i]) << (8 * i);
  }
  return word;
}

inline std::vector<std::uint64_t> DecodeLittleEndian(
    std::span<const std::byte> bytes, Width width) {
  const std::size_t wb = WordBytes(width);
  std::vector<std::uint64_t> words(bytes.size() / wb);
  for (std::size_t i = 0; i < words.size(); ++i) {
    words[i] = LoadLittleEndian(bytes.data() + i * wb, width);
  }
  return words;
}

class BinaryWordSource : public WordSource {
 public:
  BinaryWordSource(std::unique_ptr<ByteSource> bytes, Width width)
      : bytes_(std::move(bytes)), width_(width), buffer_(kBufferBytes) {}

  std::size_t Read(std::span<std::uint64_t> out) override {
    const std::size_t wb = WordBytes(width_);
    std::size_t produced = 0;
    while (produced < out.size()) {
      if (end_ - begin_ < wb) {
        if (!Refill()) break;
        continue;
      }
      const std::size_t available = (end_ - begin_) / wb;
      const std::size_t n = std::min(available, out.size() - produced);
      for (std::size_t i = 0; i < n; ++i) {
        out[produced + i] = LoadLittleEndian(buffer_.data() + begin_, width_);
        begin_ += wb;
      }
      produced += n;
    }
    return produced;
  }

  bool Rewind() override {
    if (!bytes_->Rewind()) return false;
    begin_ = end_ = 0;
    eof_ = false;
    return true;
  }

  Width width() const override { return width_; }

  // True once at least one complete word is available.
  bool Prime() {
    while (end_ - begin_ < WordBytes(width_)) {
      if (!Refill()) return false;
    }
    return true;
  }

 private:
  static constexpr std::size_t kBufferBytes = std::size_t{1} << 20;

  // Returns false at end of input; a dangling partial word is dropped with a
  // warning rather than zero-padded.
  bool Refill() {
    if (eof_) return false;
    const std::size_t leftover = end_ - begin_;
    std::memmove(buffer_.data(), buffer_.data() + begin_, leftover);
    begin_ = 0;
    end_ = leftover;
    const std::size_t n =
        bytes_->Read(std::span(buffer_.data() + end_, buffer_.size() - end_));
    end_ += n;
    if (n == 0) {
      eof_ = true;
      if (leftover != 0) {
        Warn(IngestWarning::Kind::kTruncatedWord,
             "input ends mid-word; discarded " + std::to_string(leftover) +
                 " trailing byte(s)");
        begin_ = end_ = 0;
      }
      return false;
    }
    return true;
  }

  std::unique_ptr<ByteSource> bytes_;
  Width width_;
  std::vector<std::byte> buffer_;
  std::size_t begin_ = 0;
  std::size_t end_ = 0;
  bool eof_ = false;
};

class GeneratorWordSource : public WordSource {
 public:
  GeneratorWordSource(Generator gen, Width width)
      : gen_(std::move(gen)), width_(width) {}

  std::size_t Read(std::span<std::uint64_t> out) override {
    gen_.Fill(out, width_);
    return out.size();
  }
  bool Rewind() override { return false; }
  Width width() const override { return width_; }

 private:
  Generator gen_;
  Width width_;
};

// ---------------------------------------------------------------------------
// Text format

struct TextFileHeader {
  char type_char = 'd';
  std::uint64_t count = 0;
  unsigned numbit = 64;

  Width width() const { return numbit == 32 ? Width::k32 : Width::k64; }
  friend bool operator==(const TextFileHeader&, const TextFileHeader&) = default;
};

namespace detail {

inline std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

inline std::string Lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// Parses an unsigned decimal of any length (leading zeros allowed) that must
// fit in `bits` bits.
inline std::uint64_t ParseBoundedDecimal(std::string_view digits, unsigned bits,
                                         std::uint64_t line_no) {
  if (digits.empty()) {
    throw Error(ErrorCode::kBadInput,
                "line " + std::to_string(line_no) + ": empty value");
  }
  const std::uint64_t limit =
      bits == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
  std::uint64_t value = 0;
  for (char c : digits) {
    if (c < '0' || c > '9') {
      throw Error(ErrorCode::kBadInput, "line " + std::to_string(line_no) +
                                            ": not an unsigned decimal: '" +
                                            std::string(digits) + "'");
    }
    const auto d = static_cast<std::uint64_t>(c - '0');
    if (value > (limit - d) / 10) {
      throw Error(ErrorCode::kValueOutOfRange,
                  "line " + std::to_string(line_no) + ": '" +
                      std::string(digits) + "' does not fit in " +
                      std::to_string(bits) + " bits");
    }
    value = value * 10 + d;
  }
  return value;
}

}  // namespace detail

class TextWordSource : public WordSource {
 public:
  // Reads and validates the header; data lines are parsed lazily.
  explicit TextWordSource(std::unique_ptr<std::istream> in)
      : in_(std::move(in)) {
    bool have_type = false;
    bool have_count = false;
    bool have_numbit = false;
    int keys = 0;
    std::string line;
    while (keys < 3) {
      if (!std::getline(*in_, line)) {
        throw Error(ErrorCode::kBadHeader,
                    "input ended before the type/count/numbit header");
      }
      ++line_no_;
      const std::string_view trimmed = detail::Trim(line);
      if (trimmed.empty()) continue;
      const auto colon = trimmed.find(':');
      if (colon == std::string_view::npos) {
        throw Error(ErrorCode::kBadHeader, "line " + std::to_string(line_no_) +
                                               ": expected 'key: value'");
      }
      const std::string key = detail::Lower(detail::Trim(trimmed.substr(0, colon)));
      const std::string_view value = detail::Trim(trimmed.substr(colon + 1));
      auto once = [&](bool& seen) {
        if (seen) throw Error(ErrorCode::kBadHeader, "duplicate header key '" + key + "'");
        seen = true;
      };
      if (key == "type") {
        once(have_type);
        if (value != "d") {
          throw Error(ErrorCode::kBadHeader, "unsupported type '" +
                                                 std::string(value) +
                                                 "' (only 'd' is supported)");
        }
        header_.type_char = 'd';
      } else if (key == "count") {
        once(have_count);
        try {
          header_.count = detail::ParseBoundedDecimal(value, 64, line_no_);
        } catch (const Error&) {
          throw Error(ErrorCode::kBadHeader, "bad count '" + std::string(value) + "'");
        }
        if (header_.count == 0) throw Error(ErrorCode::kBadHeader, "count must be >= 1");
      } else if (key == "numbit") {
        once(have_numbit);
        if (value == "32") {
          header_.numbit = 32;
        } else if (value == "64") {
          header_.numbit = 64;
        } else {
          throw Error(ErrorCode::kBadHeader,
                      "numbit must be 32 or 64, got '" + std::string(value) + "'");
        }
      } else {
        throw Error(ErrorCode::kBadHeader, "unknown header key '" + key + "'");
      }
      ++keys;
    }
    data_start_ = in_->tellg();
    data_line_no_ = line_no_;
  }

  const TextFileHeader& header() const { return header_; }

  std::size_t Read(std::span<std::uint64_t> out) override {
    std::size_t produced = 0;
    std::string line;
    while (produced < out.size() && !eof_) {
      if (!std::getline(*in_, line)) {
        eof_ = true;
        if (!pass_complete_) {
          pass_complete_ = true;
          if (values_ != header_.count) {
            Warn(IngestWarning::Kind::kCountMismatch,
                 "header count " + std::to_string(header_.count) + " but " +
                     std::to_string(values_) + " value(s) present; using " +
                     std::to_string(values_));
          }
        }
        break;
      }
      ++line_no_;
      const std::string_view trimmed = detail::Trim(line);
      if (trimmed.empty()) continue;
      out[produced++] =
          detail::ParseBoundedDecimal(trimmed, header_.numbit, line_no_);
      if (!pass_complete_) ++values_;
    }
    return produced;
  }

  bool Rewind() override {
    if (data_start_ == std::streampos(-1)) return false;
    in_->clear();
    in_->seekg(data_start_);
    if (!*in_) return false;
    line_no_ = data_line_no_;
    eof_ = false;
    return true;
  }

  Width width() const override { return header_.width(); }

 private:
  std::unique_ptr<std::istream> in_;
  TextFileHeader header_;
  std::streampos data_start_;
  std::uint64_t line_no_ = 0;
  std::uint64_t data_line_no_ = 0;
  std::uint64_t values_ = 0;
  bool eof_ = false;
  bool pass_complete_ = false;
};

// ---------------------------------------------------------------------------
// WordStream

class WordStream {
 public:
  WordStream(std::unique_ptr<WordSource> source, SourceKind kind,
             std::uint64_t budget_bytes, RewindPolicy rewind,
             std::string descriptor = {})
      : source_(std::move(source)),
        kind_(kind),
        width_(source_->width()),
        budget_bytes_(budget_bytes),
        rewind_(rewind),
        descriptor_(std::move(descriptor)) {
    Collect();
  }

  Width width() const { return width_; }
  SourceKind source() const { return kind_; }
  std::uint64_t budget_bytes() const { return budget_bytes_; }
  RewindPolicy rewind_policy() const { return rewind_; }
  std::uint64_t words_read() const { return words_read_; }
  bool exhausted() const { return exhausted_; }
  bool rewound() const { return rewound_; }
  const std::string& descriptor() const { return descriptor_; }
  const std::vector<IngestWarning>& warnings() const { return warnings_; }

  // Words still allowed by the budget; unbounded streams report UINT64_MAX.
  std::uint64_t remaining_budget_words() const {
    if (budget_bytes_ == 0) return ~std::uint64_t{0};
    return budget_bytes_ / WordBytes(width_) - words_read_;
  }

  // Fills as much of `out` as the source and budget allow; returns the count.
  std::size_t NextWords(std::span<std::uint64_t> out) {
    if (out.empty()) return 0;
    const std::uint64_t allowed = remaining_budget_words();
    std::size_t want = out.size();
    if (allowed < want) {
      want = static_cast<std::size_t>(allowed);
      exhausted_ = true;
    }
    std::size_t got = 0;
    while (got < want) {
      const std::size_t n = source_->Read(out.subspan(got, want - got));
      got += n;
      pass_words_ += n;
      if (got == want) break;
      if (n == 0 && !TryRewind()) {
        exhausted_ = true;
        break;
      }
    }
    words_read_ += got;
    Collect();
    return got;
  }

  std::vector<std::uint64_t> NextWords(std::size_t n) {
    std::vector<std::uint64_t> words(n);
    words.resize(NextWords(std::span(words)));
    return words;
  }

 private:
  bool TryRewind() {
    if (rewind_ != RewindPolicy::kRewind) return false;
    if (pass_words_ == 0) return false;  // nothing to replay
    if (!source_->Rewind()) {
      if (!cannot_rewind_reported_) {
        cannot_rewind_reported_ = true;
        warnings_.push_back({IngestWarning::Kind::kCannotRewind,
                             "source is not seekable; cannot rewind"});
      }
      return false;
    }
    if (!rewound_) {
      warnings_.push_back(
          {IngestWarning::Kind::kRewind,
           "input exhausted; rewinding to the first word (reused data "
           "correlates test inputs)"});
    }
    rewound_ = true;
    pass_words_ = 0;
    return true;
  }

  void Collect() {
    for (auto& w : source_->TakeWarnings()) warnings_.push_back(std::move(w));
  }

  std::unique_ptr<WordSource> source_;
  SourceKind kind_;
  Width width_;
  std::uint64_t budget_bytes_;
  RewindPolicy rewind_;
  std::string descriptor_;
  std::uint64_t words_read_ = 0;
  std::uint64_t pass_words_ = 0;
  bool exhausted_ = false;
  bool rewound_ = false;
  bool cannot_rewind_reported_ = false;
  std::vector<IngestWarning> warnings_;
};

inline std::string BudgetSuffix(std::uint64_t budget_bytes) {
  if (budget_bytes == 0) return "unbounded";
  return std::to_string(budget_bytes) + " bytes";
}

// Auto mode picks w32 only for a regular file whose length is a multiple of 4
// but not of 8; everything else (including pipes) is read as w64.
inline WordStream OpenBinary(std::unique_ptr<ByteSource> bytes, BinaryMode mode,
                             std::uint64_t budget_bytes,
                             RewindPolicy rewind = RewindPolicy::kStopWithWarning,
                             std::string name = "stdin") {
  const auto file_size = bytes->RegularFileSize();
  if (file_size && *file_size == 0) {
    throw Error(ErrorCode::kEmptySource, name + " is empty");
  }
  Width width = Width::k64;
  if (mode == BinaryMode::k32) {
    width = Width::k32;
  } else if (mode == BinaryMode::kAuto && file_size && *file_size % 4 == 0 &&
             *file_size % 8 != 0) {
    width = Width::k32;
  }
  auto source = std::make_unique<BinaryWordSource>(std::move(bytes), width);
  if (!source->Prime()) {
    throw Error(ErrorCode::kEmptySource,
                name + " holds no complete " + std::string(WidthName(width)) +
                    " word");
  }
  const SourceKind kind = file_size ? SourceKind::kBinaryFile : SourceKind::kPipe;
  std::string descriptor = std::string(SourceKindName(kind)) + " " + name +
                           " (binary, " + std::string(WidthName(width)) +
                           ", budget " + BudgetSuffix(budget_bytes) + ")";
  return WordStream(std::move(source), kind, budget_bytes, rewind,
                    std::move(descriptor));
}

struct TextInput {
  TextFileHeader header;
  WordStream stream;
};

inline TextInput ParseText(std::unique_ptr<std::istream> in,
                           std::uint64_t budget_bytes = 0,
                           RewindPolicy rewind = RewindPolicy::kStopWithWarning,
                           std::string name = "text") {
  auto source = std::make_unique<TextWordSource>(std::move(in));
  const TextFileHeader header = source->header();
  std::string descriptor = "text-file " + name + " (text, numbit " +
                           std::to_string(header.numbit) + ", budget " +
                           BudgetSuffix(budget_bytes) + ")";
  return {header, WordStream(std::move(source), SourceKind::kTextFile,
                             budget_bytes, rewind, std::move(descriptor))};
}

// Reads every value of a text input. Count mismatches are reported through
// `warnings` when given.
inline std::pair<TextFileHeader, std::vector<std::uint64_t>> ReadTextAll(
    std::unique_ptr<std::istream> in,
    std::vector<IngestWarning>* warnings = nullptr) {
  TextInput input = ParseText(std::move(in));
  std::vector<std::uint64_t> words;
  std::vector<std::uint64_t> chunk(4096);
  for (;;) {
    const std::size_t n = input.stream.NextWords(std::span(chunk));
    words.insert(words.end(), chunk.begin(), chunk.begin() + static_cast<std::ptrdiff_t>(n));
    if (n < chunk.size()) break;
  }
  if (warnings) *warnings = input.stream.warnings();
  return {input.header, std::move(words)};
}

inline std::uint64_t WriteText(std::span<const std::uint64_t> words,
                               unsigned numbit, std::ostream& out) {
  if (numbit != 32 && numbit != 64) {
    throw Error(ErrorCode::kBadInput, "numbit must be 32 or 64");
  }
  if (words.empty()) {
    throw Error(ErrorCode::kBadInput, "text format needs at least one value");
  }
  if (numbit == 32) {
    for (std::uint64_t w : words) {
      if (w >> 32 != 0) {
        throw Error(ErrorCode::kValueOutOfRange,
                    std::to_string(w) + " does not fit in 32 bits");
      }
    }
  }
  out << "type: d\ncount: " << words.size() << "\nnumbit: " << numbit << '\n';
  for (std::uint64_t w : words) out << w << '\n';
  out.flush();
  if (!out) throw Error(ErrorCode::kSinkError, "text sink write failed");
  return words.size();
}

inline WordStream OpenGenerator(Generator gen, Width width,
                                std::uint64_t budget_bytes,
                                std::string_view id) {
  std::string descriptor = "generator " + std::string(id) + " seed " +
                           std::to_string(gen.seed()) + " (" +
                           std::string(WidthName(width)) + ", budget " +
                           BudgetSuffix(budget_bytes) + ")";
  return WordStream(std::make_unique<GeneratorWordSource>(std::move(gen), width),
                    SourceKind::kInternalGenerator, budget_bytes,
                    RewindPolicy::kStopWithWarning, std::move(descriptor));
}

}  // namespace rngbattery

#endif  // RNGBATTERY_INGEST_HPP_

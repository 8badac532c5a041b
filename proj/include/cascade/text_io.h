/*
 * Copyright 2026 The Cascade Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Small text helpers shared by the file formats: number formatting, CSV
// rows, flat key=value documents and file digests.

#ifndef CASCADE_TEXT_IO_H_
#define CASCADE_TEXT_IO_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cascade {

// Shortest representation that round-trips; "nan"/"inf"/"-inf" otherwise.
std::string FormatDouble(double value);

double ParseDouble(std::string_view text);
int64_t ParseInt(std::string_view text);
bool ParseBool(std::string_view text);

std::string_view Trim(std::string_view text);
std::vector<std::string> Split(std::string_view text, char separator);

// RFC 4180 style: fields containing separators, quotes or newlines are
// quoted, embedded quotes doubled.
void WriteCsvRow(std::ostream& out, std::span<const std::string> fields);

class CsvReader {
 public:
  explicit CsvReader(std::istream& in) : in_(in) {}

  // Returns false at end of input.
  bool ReadRow(std::vector<std::string>* fields);
  int64_t line() const { return line_; }

 private:
  std::istream& in_;
  int64_t line_ = 0;
};

// Flat `key = value` document. Blank lines and lines starting with '#' are
// ignored. Repeated keys keep every value in order.
class KeyValueDocument {
 public:
  static KeyValueDocument Parse(std::istream& in, std::string_view origin);
  static KeyValueDocument Load(const std::filesystem::path& path);

  void Add(std::string key, std::string value);
  bool Has(std::string_view key) const;
  std::optional<std::string> Get(std::string_view key) const;
  std::string GetOr(std::string_view key, std::string fallback) const;
  std::vector<std::string> GetAll(std::string_view key) const;
  const std::vector<std::pair<std::string, std::string>>& entries() const {
    return entries_;
  }

  void Write(std::ostream& out) const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

// 64-bit FNV-1a over the file bytes, as 16 lowercase hex digits.
std::string FileDigest(const std::filesystem::path& path);

// Opens for reading/writing or throws Error(kIo) naming the path.
std::ifstream OpenInput(const std::filesystem::path& path);
std::ofstream OpenOutput(const std::filesystem::path& path);

}  // namespace cascade

#endif  // CASCADE_TEXT_IO_H_

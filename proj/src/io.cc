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

#include "cascade/io.h"

#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "cascade/error.h"
#include "cascade/text_io.h"
#include "json.hpp"

namespace cascade {
namespace {

using Json = nlohmann::json;

[[noreturn]] void Fail(int64_t line, const std::string& what) {
  throw Error(ErrorCode::kParse, "line " + std::to_string(line) + ": " + what);
}

std::string RequireString(const Json& j, const char* key, int64_t line) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) Fail(line, std::string("missing ") + key);
  if (it->is_string()) return it->get<std::string>();
  if (it->is_number_integer()) return std::to_string(it->get<int64_t>());
  Fail(line, std::string(key) + " must be a string");
}

std::optional<std::string> OptionalString(const Json& j, const char* key,
                                          int64_t line) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return RequireString(j, key, line);
}

std::optional<double> OptionalNumber(const Json& j, const char* key,
                                     int64_t line) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_number()) Fail(line, std::string(key) + " must be a number");
  return it->get<double>();
}

std::optional<int64_t> OptionalCount(const Json& j, const char* key,
                                     int64_t line) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_number_integer() || it->get<int64_t>() < 0) {
    Fail(line, std::string(key) + " must be a nonnegative integer");
  }
  return it->get<int64_t>();
}

ReshareEvent EventFromJson(const Json& j, int64_t line) {
  if (!j.is_object()) Fail(line, "expected a JSON object");
  ReshareEvent e;
  e.cascade_id = RequireString(j, "cascade_id", line);
  e.node_id = RequireString(j, "node_id", line);
  e.parent_id = OptionalString(j, "parent_id", line);
  auto timestamp = OptionalNumber(j, "timestamp", line);
  if (!timestamp) Fail(line, "missing timestamp");
  e.timestamp = *timestamp;
  if (auto type = OptionalString(j, "node_type", line)) {
    e.node_type = ParseNodeType(*type);
  }
  e.outdeg = OptionalCount(j, "outdeg", line).value_or(0);
  e.friend_count = OptionalCount(j, "friend_count", line);
  e.fan_count = OptionalCount(j, "fan_count", line);
  e.subscriber_count = OptionalCount(j, "subscriber_count", line);
  e.age_years = OptionalNumber(j, "age_years", line);
  e.fb_age_days = OptionalNumber(j, "fb_age_days", line);
  e.activity_days = OptionalNumber(j, "activity_days", line);
  if (auto gender = OptionalString(j, "gender", line)) {
    e.gender = ParseGender(*gender);
  }
  e.views_orig_cum = OptionalCount(j, "views_orig_cum", line);
  e.views_reshares_cum = OptionalCount(j, "views_reshares_cum", line);
  return e;
}

// Writes the fields in declaration order so output is stable.
std::string EventToJsonLine(const ReshareEvent& e) {
  std::string out = "{";
  bool first = true;
  auto field = [&](const char* key, const Json& value) {
    if (!first) out += ',';
    first = false;
    out += Json(key).dump();
    out += ':';
    out += value.dump();
  };
  field("cascade_id", e.cascade_id);
  field("node_id", e.node_id);
  field("parent_id", e.parent_id ? Json(*e.parent_id) : Json(nullptr));
  field("timestamp", e.timestamp);
  field("node_type", std::string(NodeTypeName(e.node_type)));
  field("outdeg", e.outdeg);
  auto optional = [&](const char* key, const auto& value) {
    if (value) field(key, *value);
  };
  optional("friend_count", e.friend_count);
  optional("fan_count", e.fan_count);
  optional("subscriber_count", e.subscriber_count);
  optional("age_years", e.age_years);
  optional("fb_age_days", e.fb_age_days);
  optional("activity_days", e.activity_days);
  if (e.gender) field("gender", std::string(GenderName(*e.gender)));
  optional("views_orig_cum", e.views_orig_cum);
  optional("views_reshares_cum", e.views_reshares_cum);
  out += '}';
  return out;
}

double ContentFraction(const Json& j, std::string_view key, int64_t line) {
  auto value = OptionalNumber(j, std::string(key).c_str(), line);
  if (!value) return 0.0;
  if (*value < 0.0 || *value > 1.0) {
    Fail(line, std::string(key) + " must lie in [0, 1]");
  }
  return *value;
}

bool ContentFlag(const Json& j, const char* key, int64_t line) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return false;
  if (it->is_boolean()) return it->get<bool>();
  if (it->is_number_integer()) return it->get<int64_t>() != 0;
  Fail(line, std::string(key) + " must be a boolean");
}

}  // namespace

std::vector<ReshareEvent> ReadEventsJsonl(std::istream& in) {
  std::vector<ReshareEvent> events;
  std::string line;
  int64_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (Trim(line).empty()) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::exception& e) {
      Fail(line_number, e.what());
    }
    try {
      events.push_back(EventFromJson(j, line_number));
    } catch (const Json::exception& e) {
      Fail(line_number, e.what());
    }
  }
  return events;
}

std::vector<ReshareEvent> ReadEventsCsv(std::istream& in) {
  CsvReader reader(in);
  std::vector<std::string> header;
  if (!reader.ReadRow(&header)) return {};
  std::vector<std::string> row;
  std::vector<ReshareEvent> events;
  while (reader.ReadRow(&row)) {
    if (row.size() == 1 && Trim(row[0]).empty()) continue;
    if (row.size() != header.size()) {
      Fail(reader.line(), "expected " + std::to_string(header.size()) +
                              " fields, got " + std::to_string(row.size()));
    }
    // Reuse the JSON path: empty cells are absent, numeric cells numbers.
    Json j = Json::object();
    for (size_t c = 0; c < header.size(); ++c) {
      const std::string_view cell = Trim(row[c]);
      if (cell.empty()) continue;
      const std::string& key = header[c];
      if (key == "cascade_id" || key == "node_id" || key == "parent_id" ||
          key == "node_type" || key == "gender") {
        j[key] = std::string(cell);
      } else if (key == "timestamp" || key == "age_years" ||
                 key == "fb_age_days" || key == "activity_days") {
        j[key] = ParseDouble(cell);
      } else {
        j[key] = ParseInt(cell);
      }
    }
    events.push_back(EventFromJson(j, reader.line()));
  }
  return events;
}

std::vector<ReshareEvent> ReadEvents(const std::filesystem::path& path) {
  std::ifstream in = OpenInput(path);
  try {
    if (path.extension() == ".csv") return ReadEventsCsv(in);
    return ReadEventsJsonl(in);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.detail());
  }
}

void WriteEventsJsonl(std::ostream& out, std::span<const ReshareEvent> events) {
  for (const ReshareEvent& e : events) out << EventToJsonLine(e) << '\n';
}

std::vector<ContentRecord> ReadContentJsonl(std::istream& in) {
  std::vector<ContentRecord> records;
  std::string line;
  int64_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (Trim(line).empty()) continue;
    try {
      const Json j = Json::parse(line);
      ContentRecord r;
      r.cascade_id = RequireString(j, "cascade_id", line_number);
      for (size_t i = 0; i < r.scores.size(); ++i) {
        r.scores[i] = ContentFraction(j, ContentRecord::kScoreNames[i],
                                      line_number);
      }
      r.is_en = ContentFlag(j, "is_en", line_number);
      r.has_caption = ContentFlag(j, "has_caption", line_number);
      r.liwc_pos = ContentFraction(j, "liwc_pos", line_number);
      r.liwc_neg = ContentFraction(j, "liwc_neg", line_number);
      r.liwc_soc = ContentFraction(j, "liwc_soc", line_number);
      r.category = OptionalString(j, "category", line_number);
      r.cluster_id = OptionalString(j, "cluster_id", line_number);
      records.push_back(std::move(r));
    } catch (const Json::exception& e) {
      Fail(line_number, e.what());
    }
  }
  return records;
}

std::vector<ContentRecord> ReadContent(const std::filesystem::path& path) {
  std::ifstream in = OpenInput(path);
  try {
    return ReadContentJsonl(in);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.detail());
  }
}

void WriteContentJsonl(std::ostream& out,
                       std::span<const ContentRecord> records) {
  for (const ContentRecord& r : records) {
    Json j = Json::object();  // keys serialize sorted
    j["cascade_id"] = r.cascade_id;
    for (size_t i = 0; i < r.scores.size(); ++i) {
      j[std::string(ContentRecord::kScoreNames[i])] = r.scores[i];
    }
    j["is_en"] = r.is_en;
    j["has_caption"] = r.has_caption;
    j["liwc_pos"] = r.liwc_pos;
    j["liwc_neg"] = r.liwc_neg;
    j["liwc_soc"] = r.liwc_soc;
    if (r.category) j["category"] = *r.category;
    if (r.cluster_id) j["cluster_id"] = *r.cluster_id;
    out << j.dump() << '\n';
  }
}

SocialGraph ReadEdgeList(std::istream& in, bool directed) {
  SocialGraph graph(directed);
  std::string line;
  int64_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const std::string_view trimmed = Trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    std::istringstream fields{std::string(trimmed)};
    std::string a, b, extra;
    if (!(fields >> a >> b) || (fields >> extra)) {
      Fail(line_number, "expected two node ids");
    }
    graph.AddEdge(a, b);
  }
  return graph;
}

SocialGraph ReadEdgeList(const std::filesystem::path& path, bool directed) {
  std::ifstream in = OpenInput(path);
  try {
    return ReadEdgeList(in, directed);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.detail());
  }
}

void WriteEdgeList(std::ostream& out, const SocialGraph& graph) {
  for (const auto& [a, b] : graph.Edges()) out << a << ' ' << b << '\n';
}

std::vector<Cascade> AssembleCascades(std::vector<CascadeTree> trees,
                                      std::span<const ContentRecord> content) {
  std::map<std::string_view, const ContentRecord*> by_id;
  for (const ContentRecord& r : content) by_id[r.cascade_id] = &r;
  std::vector<Cascade> cascades;
  cascades.reserve(trees.size());
  for (CascadeTree& tree : trees) {
    Cascade c{std::move(tree), std::nullopt};
    auto it = by_id.find(c.tree.id());
    if (it != by_id.end()) c.content = *it->second;
    cascades.push_back(std::move(c));
  }
  return cascades;
}

}  // namespace cascade

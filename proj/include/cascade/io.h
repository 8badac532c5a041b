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

// File formats: reshare events (JSONL or CSV), content records (JSONL) and
// social-graph edge lists.
//
// Event fields, one JSON object per line or one CSV column each:
//   cascade_id, node_id, parent_id, timestamp, node_type, outdeg,
//   friend_count, fan_count, subscriber_count, age_years, fb_age_days,
//   activity_days, gender, views_orig_cum, views_reshares_cum
// Required: cascade_id, node_id, timestamp. parent_id is null, absent or an
// empty CSV cell for the root. node_type defaults to "user", outdeg to 0.
// gender is "female", "male" or "other".

#ifndef CASCADE_IO_H_
#define CASCADE_IO_H_

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "cascade/cascade_model.h"
#include "cascade/features.h"
#include "cascade/tasks.h"

namespace cascade {

std::vector<ReshareEvent> ReadEventsJsonl(std::istream& in);
std::vector<ReshareEvent> ReadEventsCsv(std::istream& in);
// Dispatches on extension: ".csv" reads CSV, anything else JSONL.
std::vector<ReshareEvent> ReadEvents(const std::filesystem::path& path);
void WriteEventsJsonl(std::ostream& out, std::span<const ReshareEvent> events);

std::vector<ContentRecord> ReadContentJsonl(std::istream& in);
std::vector<ContentRecord> ReadContent(const std::filesystem::path& path);
void WriteContentJsonl(std::ostream& out,
                       std::span<const ContentRecord> records);

// Two whitespace-separated ids per line; blank lines and '#' comments skipped.
SocialGraph ReadEdgeList(std::istream& in, bool directed);
SocialGraph ReadEdgeList(const std::filesystem::path& path, bool directed);
void WriteEdgeList(std::ostream& out, const SocialGraph& graph);

// Pairs trees with content by cascade id; content without a tree is ignored.
std::vector<Cascade> AssembleCascades(std::vector<CascadeTree> trees,
                                      std::span<const ContentRecord> content);

}  // namespace cascade

#endif  // CASCADE_IO_H_

// Copyright 2026 The Coarselab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef COARSELAB_JSON_IO_HPP
#define COARSELAB_JSON_IO_HPP

#include <string>

#include <json.hpp>

#include "coarselab/category.hpp"
#include "coarselab/harness.hpp"

// Deterministic serialisation: objects sort keys, relation pairs are
// sorted, and timing fields are omitted unless explicitly requested, so
// identical seeds give bit-identical files at any parallelism level.

namespace coarselab {

using Json = nlohmann::json;

Json scale_to_json(Scale s);
Scale scale_from_json(const Json& j);

Json space_to_json(const Space& s);      // {"points": [...], "dist": [[...]]}
SpacePtr space_from_json(const Json& j);

Json lfcm_to_json(const LFCMSpace& s);   // {"space": ..., "blocks": [[...]]}
LFCMPtr lfcm_from_json(const Json& j);

/// {"space_ref": ..., "dims": {"<block>": n}}; a non-contiguous
/// coordinate layout is preserved under the extra "layout" key.
Json module_to_json(const Module& m);
Module module_from_json(const Json& j);

Json matrix_to_json(const Matrix& m);    // rows of [re, im] entries
Matrix matrix_from_json(const Json& j);

Json operator_to_json(const Operator& t);
Operator operator_from_json(const Json& j);

Json relation_to_json(const Relation& r);  // {"pairs": [[y, x], ...]}

Json point_map_to_json(const PointMap& f, const LFCMPtr& space);
std::pair<LFCMPtr, PointMap> point_map_from_json(const Json& j);

Json report_to_json(const RelationReport& r);
Json extract_step_to_json(const ExtractStep& s);
Json extraction_to_json(const ExtractionResult& r);

Json config_to_json(const ExperimentConfig& c);
ExperimentConfig config_from_json(const Json& j);

Json experiment_to_json(const ExperimentResult& r, bool include_timings = false);

/// Action of a functor on a finite module collection: the object map is
/// recorded by module ids (indices into "objects"), unitaries by
/// reference into the same table.
Json functor_table_to_json(const FunctorSpec& f,
                           const std::vector<Module>& modules);

/// Functor acting on exactly the tabled modules; other inputs are
/// rejected with std::invalid_argument.
FunctorSpec functor_table_from_json(const Json& j);

/// Binary matrix file: magic "CRLB", u32 rows, u32 cols, u8 row-major
/// flag, then float64 (re, im) pairs in the indicated order, little
/// endian.
void write_matrix_crlb(const std::string& path, const Matrix& m,
                       bool row_major = false);
Matrix read_matrix_crlb(const std::string& path);

Json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const Json& j);

}  // namespace coarselab

#endif  // COARSELAB_JSON_IO_HPP

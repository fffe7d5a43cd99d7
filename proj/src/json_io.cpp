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

#include "coarselab/json_io.hpp"

#include <cstring>
#include <fstream>
#include <map>
#include <memory>
#include <stdexcept>

namespace coarselab {

Json scale_to_json(Scale s) {
  if (s.is_inf()) return Json("inf");
  return Json(s.value());
}

Scale scale_from_json(const Json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return Scale::inf();
    throw std::invalid_argument("scale: expected number or \"inf\"");
  }
  return Scale(j.get<std::uint64_t>());
}

Json space_to_json(const Space& s) {
  Json j;
  j["points"] = s.points();
  Json dist = Json::array();
  for (std::size_t i = 0; i < s.size(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < s.size(); ++k)
      row.push_back(scale_to_json(s.dist(i, k)));
    dist.push_back(std::move(row));
  }
  j["dist"] = std::move(dist);
  return j;
}

SpacePtr space_from_json(const Json& j) {
  const std::vector<PointId> points = j.at("points").get<std::vector<PointId>>();
  std::vector<std::vector<Scale>> dist;
  for (const Json& row : j.at("dist")) {
    std::vector<Scale> r;
    for (const Json& v : row) r.push_back(scale_from_json(v));
    dist.push_back(std::move(r));
  }
  return std::make_shared<const Space>(points, dist);
}

Json lfcm_to_json(const LFCMSpace& s) {
  Json j;
  j["space"] = space_to_json(*s.base());
  j["blocks"] = s.blocks();
  return j;
}

LFCMPtr lfcm_from_json(const Json& j) {
  return make_lfcm(space_from_json(j.at("space")),
                   j.at("blocks").get<std::vector<std::vector<PointId>>>());
}

Json module_to_json(const Module& m) {
  Json j;
  j["space_ref"] = lfcm_to_json(*m.space());
  Json dims = Json::object();
  for (std::size_t b = 0; b < m.space()->block_count(); ++b)
    dims[std::to_string(b)] = m.rank_of_block(b);
  j["dims"] = std::move(dims);
  const Module canonical = make_module(m.space(), m.dims());
  if (!(canonical.block_labels() == m.block_labels()))
    j["layout"] = m.block_labels();
  return j;
}

Module module_from_json(const Json& j) {
  const LFCMPtr sp = lfcm_from_json(j.at("space_ref"));
  if (j.contains("layout"))
    return Module(sp, j.at("layout").get<std::vector<int>>());
  DimensionVector dims(sp->block_count(), 0);
  for (const auto& [key, value] : j.at("dims").items())
    dims.at(std::stoul(key)) = value.get<int>();
  return make_module(sp, dims);
}

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < m.cols(); ++k)
      row.push_back(Json::array({m(i, k).real(), m(i, k).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json_with_shape(const Json& j, std::size_t rows,
                                   std::size_t cols) {
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t k = 0; k < cols; ++k) {
      const Json& e = j.at(i).at(k);
      m(i, k) = Complex(e.at(0).get<double>(), e.at(1).get<double>());
    }
  return m;
}

Matrix matrix_from_json(const Json& j) {
  const std::size_t rows = j.size();
  const std::size_t cols = rows == 0 ? 0 : j.at(0).size();
  return matrix_from_json_with_shape(j, rows, cols);
}

Json operator_to_json(const Operator& t) {
  Json j;
  j["source_module"] = module_to_json(t.source);
  j["target_module"] = module_to_json(t.target);
  j["matrix"] = matrix_to_json(t.mat);
  return j;
}

Operator operator_from_json(const Json& j) {
  Module src = module_from_json(j.at("source_module"));
  Module tgt = module_from_json(j.at("target_module"));
  Matrix m = matrix_from_json_with_shape(j.at("matrix"), tgt.dim(), src.dim());
  return Operator(std::move(src), std::move(tgt), std::move(m));
}

Json relation_to_json(const Relation& r) {
  Json pairs = Json::array();
  for (const auto& [y, x] : r.pairs()) pairs.push_back(Json::array({y, x}));
  Json j;
  j["pairs"] = std::move(pairs);
  return j;
}

Json point_map_to_json(const PointMap& f, const LFCMPtr& space) {
  Json j;
  j["space"] = lfcm_to_json(*space);
  j["image"] = f.image();
  return j;
}

std::pair<LFCMPtr, PointMap> point_map_from_json(const Json& j) {
  const LFCMPtr sp = lfcm_from_json(j.at("space"));
  PointMap f(sp->base(), sp->base(), j.at("image").get<std::vector<PointId>>());
  return {sp, f};
}

namespace {

Json profile_to_json(const Profile& p) {
  Json arr = Json::array();
  for (Scale s : p.values()) arr.push_back(scale_to_json(s));
  return arr;
}

}  // namespace

Json report_to_json(const RelationReport& r) {
  Json j;
  j["expansion"] = profile_to_json(r.expansion);
  j["co_expansion"] = profile_to_json(r.co_expansion);
  j["densely_defined_scale"] = scale_to_json(r.densely_defined_scale);
  j["coarsely_surjective_scale"] = scale_to_json(r.coarsely_surjective_scale);
  j["controlled"] = r.controlled();
  j["transpose_controlled"] = r.transpose_controlled();
  j["densely_defined"] = r.densely_defined();
  j["coarsely_surjective"] = r.coarsely_surjective();
  j["partial_coarse_embedding"] = r.partial_coarse_embedding();
  j["coarse_equivalence"] = r.coarse_equivalence();
  return j;
}

Json extract_step_to_json(const ExtractStep& s) {
  Json j;
  j["delta"] = s.params.delta;
  j["F_scale"] = scale_to_json(s.params.f_scale);
  j["E_scale"] = scale_to_json(s.params.e_scale);
  j["mode"] = rel_mode_name(s.params.mode);
  j["relation_size"] = s.relation_size;
  Json w;
  w["densely_defined"] = scale_to_json(s.report.densely_defined_scale);
  w["coarsely_surjective"] = scale_to_json(s.report.coarsely_surjective_scale);
  w["expansion_max"] = scale_to_json(s.report.expansion.max_value());
  w["co_expansion_max"] = scale_to_json(s.report.co_expansion.max_value());
  w["inverse_defect"] = scale_to_json(s.inverse_defect);
  j["witness_scales"] = std::move(w);
  j["verdict"] = s.success ? "ok" : "failed";
  j["failures"] = s.failures;
  return j;
}

Json extraction_to_json(const ExtractionResult& r) {
  Json j;
  j["success"] = r.success;
  j["step_index"] = r.step_index;
  if (r.relation) j["relation"] = relation_to_json(*r.relation);
  j["report"] = report_to_json(r.report);
  Json steps = Json::array();
  for (const ExtractStep& s : r.steps) steps.push_back(extract_step_to_json(s));
  j["steps"] = std::move(steps);
  return j;
}

Json config_to_json(const ExperimentConfig& c) {
  Json j;
  j["kind"] = space_kind_name(c.kind);
  j["size"] = c.size;
  j["components"] = c.components;
  j["distortion"] = c.distortion;
  j["scramble_prop"] = c.scramble_prop;
  j["delta"] = c.delta;
  j["mode"] = rel_mode_name(c.mode);
  j["seed"] = c.seed;
  Json sched = Json::array();
  for (const auto& [f, e] : c.schedule)
    sched.push_back(Json::array({scale_to_json(f), scale_to_json(e)}));
  j["schedule"] = std::move(sched);
  if (c.module_dims) j["module_dims"] = *c.module_dims;
  if (c.recovery_bound) j["recovery_bound"] = scale_to_json(*c.recovery_bound);
  return j;
}

ExperimentConfig config_from_json(const Json& j) {
  ExperimentConfig c;
  c.kind = space_kind_from_name(j.at("kind").get<std::string>());
  c.size = j.at("size").get<int>();
  if (j.contains("components")) c.components = j.at("components").get<int>();
  if (j.contains("distortion")) c.distortion = j.at("distortion").get<int>();
  if (j.contains("scramble_prop"))
    c.scramble_prop = j.at("scramble_prop").get<int>();
  if (j.contains("delta")) c.delta = j.at("delta").get<double>();
  if (j.contains("mode"))
    c.mode = j.at("mode").get<std::string>() == "windows" ? RelMode::Windows
                                                          : RelMode::Blocks;
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("schedule"))
    for (const Json& s : j.at("schedule"))
      c.schedule.emplace_back(scale_from_json(s.at(0)), scale_from_json(s.at(1)));
  if (j.contains("module_dims"))
    c.module_dims = j.at("module_dims").get<DimensionVector>();
  if (j.contains("recovery_bound"))
    c.recovery_bound = scale_from_json(j.at("recovery_bound"));
  c.validate();
  return c;
}

Json experiment_to_json(const ExperimentResult& r, bool include_timings) {
  Json j;
  j["config"] = config_to_json(r.config);
  j["extraction_success"] = r.extraction_success;
  j["steps_used"] = r.steps_used;
  j["relation_size"] = r.relation_size;
  j["closeness_to_truth"] = scale_to_json(r.closeness_to_truth);
  j["recovered"] = r.recovered;
  j["within_bound"] = r.within_bound;
  Json steps = Json::array();
  for (const ExtractStep& s : r.steps) steps.push_back(extract_step_to_json(s));
  j["steps"] = std::move(steps);
  if (include_timings) j["wall_ms"] = r.wall_ms;
  return j;
}

Json functor_table_to_json(const FunctorSpec& f,
                           const std::vector<Module>& modules) {
  std::vector<Module> objects;
  const auto object_id = [&objects](const Module& m) {
    for (std::size_t i = 0; i < objects.size(); ++i)
      if (objects[i] == m) return i;
    objects.push_back(m);
    return objects.size() - 1;
  };
  Json object_map = Json::object();
  Json unitaries = Json::object();
  for (const Module& m : modules) {
    const std::size_t src = object_id(m);
    const std::size_t dst = object_id(f.apply_object(m));
    object_map[std::to_string(src)] = dst;
    unitaries[std::to_string(src)] = matrix_to_json(f.unitary(m).mat);
  }
  Json objs = Json::array();
  for (const Module& m : objects) objs.push_back(module_to_json(m));
  Json j;
  j["objects"] = std::move(objs);
  j["object_map"] = std::move(object_map);
  j["unitaries"] = std::move(unitaries);
  return j;
}

FunctorSpec functor_table_from_json(const Json& j) {
  auto objects = std::make_shared<std::vector<Module>>();
  for (const Json& m : j.at("objects"))
    objects->push_back(module_from_json(m));
  auto mapped = std::make_shared<std::map<std::size_t, std::size_t>>();
  for (const auto& [key, value] : j.at("object_map").items())
    (*mapped)[std::stoul(key)] = value.get<std::size_t>();
  auto mats = std::make_shared<std::map<std::size_t, Matrix>>();
  for (const auto& [key, value] : j.at("unitaries").items()) {
    const std::size_t src = std::stoul(key);
    const std::size_t dst = mapped->at(src);
    (*mats)[src] = matrix_from_json_with_shape(
        value, objects->at(dst).dim(), objects->at(src).dim());
  }
  const auto lookup = [objects, mapped](const Module& m) {
    for (const auto& [src, dst] : *mapped)
      if (objects->at(src) == m) return std::pair{src, dst};
    throw std::invalid_argument("functor table: module not in the table");
  };
  FunctorSpec spec;
  spec.object_map = [objects, lookup](const Module& m) {
    return objects->at(lookup(m).second);
  };
  spec.unitary = [objects, lookup, mats](const Module& m) {
    const auto [src, dst] = lookup(m);
    return Operator(objects->at(src), objects->at(dst), mats->at(src));
  };
  return spec;
}

namespace {

void put_u32(std::ofstream& out, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                        static_cast<unsigned char>((v >> 8) & 0xff),
                        static_cast<unsigned char>((v >> 16) & 0xff),
                        static_cast<unsigned char>((v >> 24) & 0xff)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::ifstream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  return static_cast<std::uint32_t>(b[0]) |
         (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) |
         (static_cast<std::uint32_t>(b[3]) << 24);
}

void put_f64(std::ofstream& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(bits >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

double get_f64(std::ifstream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

}  // namespace

void write_matrix_crlb(const std::string& path, const Matrix& m,
                       bool row_major) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("crlb: cannot open " + path);
  out.write("CRLB", 4);
  put_u32(out, static_cast<std::uint32_t>(m.rows()));
  put_u32(out, static_cast<std::uint32_t>(m.cols()));
  out.put(row_major ? 1 : 0);
  if (row_major) {
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) {
        put_f64(out, m(i, j).real());
        put_f64(out, m(i, j).imag());
      }
  } else {
    for (std::size_t j = 0; j < m.cols(); ++j)
      for (std::size_t i = 0; i < m.rows(); ++i) {
        put_f64(out, m(i, j).real());
        put_f64(out, m(i, j).imag());
      }
  }
  if (!out) throw std::runtime_error("crlb: write failed for " + path);
}

Matrix read_matrix_crlb(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("crlb: cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::strncmp(magic, "CRLB", 4) != 0)
    throw std::runtime_error("crlb: bad magic in " + path);
  const std::uint32_t rows = get_u32(in);
  const std::uint32_t cols = get_u32(in);
  const int row_major = in.get();
  Matrix m(rows, cols);
  if (row_major == 1) {
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) {
        const double re = get_f64(in), im = get_f64(in);
        m(i, j) = Complex(re, im);
      }
  } else {
    for (std::size_t j = 0; j < cols; ++j)
      for (std::size_t i = 0; i < rows; ++i) {
        const double re = get_f64(in), im = get_f64(in);
        m(i, j) = Complex(re, im);
      }
  }
  if (!in) throw std::runtime_error("crlb: truncated file " + path);
  return m;
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  Json j;
  in >> j;
  return j;
}

void save_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << j.dump(2) << "\n";
}

}  // namespace coarselab

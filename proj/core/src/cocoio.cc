// Copyright 2026 The riscore Authors.
// SPDX-License-Identifier: Apache-2.0

#include "riscore/cocoio.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <numeric>
#include <random>
#include <unordered_map>
#include <unordered_set>

#include <boost/math/distributions/students_t.hpp>
#include <nlohmann/json.hpp>

#include "riscore/error.h"

namespace riscore {
namespace {

using nlohmann::json;

std::string ReadText(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

json ParseJson(std::string_view text, std::string_view source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParseError,
                std::string(source) + ": " + e.what());
  }
}

[[noreturn]] void Fail(std::string_view source, const std::string& where,
                       const std::string& what) {
  throw Error(ErrorCode::kParseError,
              std::string(source) + ": " + where + ": " + what);
}

template <typename T>
T Get(const json& obj, const char* key, std::string_view source,
      const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) Fail(source, where, std::string("missing '") + key + "'");
  try {
    return it->get<T>();
  } catch (const json::exception& e) {
    Fail(source, where, std::string("bad '") + key + "': " + e.what());
  }
}

Box GetBox(const json& obj, std::string_view source, const std::string& where) {
  auto v = Get<std::vector<double>>(obj, "bbox", source, where);
  if (v.size() != 4) Fail(source, where, "bbox must have 4 numbers");
  Box box{v[0], v[1], v[2], v[3]};
  if (!(box.w > 0.0 && box.h > 0.0) || !std::isfinite(box.x) ||
      !std::isfinite(box.y) || !std::isfinite(box.w) || !std::isfinite(box.h)) {
    Fail(source, where, "bbox needs finite values and positive width/height");
  }
  return box;
}

json BoxJson(const Box& b) { return json::array({b.x, b.y, b.w, b.h}); }

// Uniform draw in [0, bound) by rejection, so results do not depend on the
// standard library's distribution implementation.
std::uint64_t Bounded(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % bound;
  for (;;) {
    std::uint64_t r = rng();
    if (r < limit) return r % bound;
  }
}

template <typename T>
void Shuffle(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[Bounded(rng, i)]);
  }
}

json AnnotationSetJson(const AnnotationSet& set) {
  json images = json::array();
  for (const auto& img : set.images) {
    json j = {{"id", img.id}, {"width", img.width}, {"height", img.height}};
    if (!img.file_name.empty()) j["file_name"] = img.file_name;
    images.push_back(std::move(j));
  }
  json categories = json::array();
  for (const auto& cat : set.categories) {
    json j = {{"id", cat.id}, {"name", cat.name}};
    if (!cat.split.empty()) j["split"] = cat.split;
    categories.push_back(std::move(j));
  }
  json anns = json::array();
  for (const auto& ann : set.annotations) {
    anns.push_back({{"id", ann.id},
                    {"image_id", ann.image_id},
                    {"category_id", ann.class_id},
                    {"bbox", BoxJson(ann.box)},
                    {"area", ann.box.area()},
                    {"iscrowd", ann.iscrowd ? 1 : 0}});
  }
  return {{"images", std::move(images)},
          {"categories", std::move(categories)},
          {"annotations", std::move(anns)}};
}

}  // namespace

std::string FormatDouble(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void AnnotationSet::Validate() const {
  std::unordered_set<ImageId> image_set;
  for (const auto& img : images) {
    if (!image_set.insert(img.id).second) {
      throw Error(ErrorCode::kParseError,
                  "duplicate image id " + std::to_string(img.id));
    }
  }
  std::unordered_set<ClassId> class_set;
  for (const auto& cat : categories) {
    if (!class_set.insert(cat.id).second) {
      throw Error(ErrorCode::kParseError,
                  "duplicate category id " + std::to_string(cat.id));
    }
  }
  std::unordered_set<AnnotationId> ann_set;
  for (const auto& ann : annotations) {
    if (!ann_set.insert(ann.id).second) {
      throw Error(ErrorCode::kParseError,
                  "duplicate annotation id " + std::to_string(ann.id));
    }
    if (!image_set.contains(ann.image_id) || !class_set.contains(ann.class_id)) {
      throw Error(ErrorCode::kDanglingReference,
                  "annotation " + std::to_string(ann.id) +
                      " references image " + std::to_string(ann.image_id) +
                      " / category " + std::to_string(ann.class_id));
    }
    if (!(ann.box.w > 0.0 && ann.box.h > 0.0)) {
      throw Error(ErrorCode::kParseError,
                  "annotation " + std::to_string(ann.id) + " has empty box");
    }
  }
}

const Category* AnnotationSet::find_category(ClassId id) const {
  for (const auto& cat : categories) {
    if (cat.id == id) return &cat;
  }
  return nullptr;
}

std::set<ImageId> AnnotationSet::image_ids() const {
  std::set<ImageId> ids;
  for (const auto& img : images) ids.insert(img.id);
  return ids;
}

AnnotationSet ParseAnnotations(const std::filesystem::path& path) {
  return ParseAnnotationsText(ReadText(path), path.string());
}

AnnotationSet ParseAnnotationsText(std::string_view text,
                                   std::string_view source) {
  const json root = ParseJson(text, source);
  if (!root.is_object()) Fail(source, "root", "expected a JSON object");
  AnnotationSet set;
  auto array = [&](const char* key) -> const json& {
    auto it = root.find(key);
    if (it == root.end() || !it->is_array()) {
      Fail(source, "root", std::string("missing array '") + key + "'");
    }
    return *it;
  };

  const json& images = array("images");
  for (std::size_t i = 0; i < images.size(); ++i) {
    const json& j = images[i];
    std::string where = "images[" + std::to_string(i) + "]";
    ImageInfo img;
    img.id = Get<ImageId>(j, "id", source, where);
    img.width = j.contains("width") ? Get<int>(j, "width", source, where) : 0;
    img.height = j.contains("height") ? Get<int>(j, "height", source, where) : 0;
    if (j.contains("file_name")) {
      img.file_name = Get<std::string>(j, "file_name", source, where);
    }
    set.images.push_back(std::move(img));
  }
  const json& categories = array("categories");
  for (std::size_t i = 0; i < categories.size(); ++i) {
    const json& j = categories[i];
    std::string where = "categories[" + std::to_string(i) + "]";
    Category cat;
    cat.id = Get<ClassId>(j, "id", source, where);
    cat.name = Get<std::string>(j, "name", source, where);
    if (j.contains("split")) cat.split = Get<std::string>(j, "split", source, where);
    set.categories.push_back(std::move(cat));
  }
  const json& anns = array("annotations");
  for (std::size_t i = 0; i < anns.size(); ++i) {
    const json& j = anns[i];
    std::string where = "annotations[" + std::to_string(i) + "]";
    Annotation ann;
    ann.id = Get<AnnotationId>(j, "id", source, where);
    ann.image_id = Get<ImageId>(j, "image_id", source, where);
    ann.class_id = Get<ClassId>(j, "category_id", source, where);
    ann.box = GetBox(j, source, where);
    if (j.contains("iscrowd")) {
      const json& crowd = j["iscrowd"];
      ann.iscrowd = crowd.is_boolean() ? crowd.get<bool>() : crowd.get<int>() != 0;
    }
    set.annotations.push_back(ann);
  }
  set.Validate();
  return set;
}

std::string SerializeAnnotations(const AnnotationSet& set) {
  return AnnotationSetJson(set).dump(1) + "\n";
}

ClassPartition PartitionFromCategories(std::span<const Category> categories) {
  ClassPartition partition;
  for (const auto& cat : categories) {
    if (cat.split == "base") partition.base.insert(cat.id);
    if (cat.split == "novel") partition.novel.insert(cat.id);
  }
  return partition;
}

std::vector<Detection> ParseResults(const std::filesystem::path& path) {
  return ParseResultsText(ReadText(path), path.string());
}

std::vector<Detection> ParseResultsText(std::string_view text,
                                        std::string_view source) {
  const json root = ParseJson(text, source);
  if (!root.is_array()) Fail(source, "root", "expected a JSON array");
  std::vector<Detection> dets;
  dets.reserve(root.size());
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < root.size(); ++i) {
    const json& j = root[i];
    std::string where = "results[" + std::to_string(i) + "]";
    if (!j.is_object()) Fail(source, where, "expected an object");
    Detection det;
    det.image_id = Get<ImageId>(j, "image_id", source, where);
    det.class_id = Get<ClassId>(j, "category_id", source, where);
    det.box = GetBox(j, source, where);
    det.score = Get<double>(j, "score", source, where);
    if (!(det.score >= 0.0 && det.score <= 1.0)) {
      Fail(source, where, "score outside [0, 1]");
    }
    if (auto it = j.find("det_id"); it != j.end()) {
      det.det_id = it->is_string() ? it->get<std::string>() : it->dump();
    } else {
      det.det_id = std::to_string(i);
    }
    if (!seen.insert(det.det_id).second) {
      Fail(source, where, "duplicate det_id '" + det.det_id + "'");
    }
    if (j.contains("score_vector")) {
      auto v = Get<std::vector<double>>(j, "score_vector", source, where);
      for (double s : v) {
        if (!(s >= 0.0 && s <= 1.0)) {
          Fail(source, where, "score_vector entry outside [0, 1]");
        }
      }
      det.score_vector = std::move(v);
    }
    if (j.contains("score_raw")) {
      det.score_raw = Get<double>(j, "score_raw", source, where);
    }
    for (const auto& [key, value] : j.items()) {
      if (key == "image_id" || key == "category_id" || key == "bbox" ||
          key == "score" || key == "det_id" || key == "score_vector" ||
          key == "score_raw") {
        continue;
      }
      det.extra.emplace(key, value.dump());
    }
    dets.push_back(std::move(det));
  }
  return dets;
}

std::string SerializeResults(std::span<const Detection> detections) {
  json root = json::array();
  for (const auto& det : detections) {
    json j = json::object();
    for (const auto& [key, value] : det.extra) j[key] = json::parse(value);
    j["image_id"] = det.image_id;
    j["category_id"] = det.class_id;
    j["bbox"] = BoxJson(det.box);
    j["score"] = det.score;
    j["det_id"] = det.det_id;
    if (det.score_vector) j["score_vector"] = *det.score_vector;
    if (det.score_raw) j["score_raw"] = *det.score_raw;
    root.push_back(std::move(j));
  }
  return root.dump(1) + "\n";
}

KShotSeed SampleKShot(const AnnotationSet& full, std::size_t k,
                      std::span<const ClassId> classes,
                      std::uint64_t rng_seed) {
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "k must be positive");

  // class -> image -> instance ids, both in id order for reproducibility.
  std::map<ClassId, std::map<ImageId, std::vector<AnnotationId>>> by_class;
  for (const auto& ann : full.annotations) {
    if (!ann.iscrowd) by_class[ann.class_id][ann.image_id].push_back(ann.id);
  }
  for (auto& [cls, images] : by_class) {
    for (auto& [img, ids] : images) std::sort(ids.begin(), ids.end());
  }

  KShotSeed seed;
  seed.k = k;
  seed.rng_seed = rng_seed;
  std::mt19937_64 rng(rng_seed);
  std::set<AnnotationId> chosen;
  std::set<ImageId> chosen_images;
  std::set<ClassId> done;
  for (ClassId cls : classes) {
    if (!full.find_category(cls)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "class " + std::to_string(cls) + " is not a category");
    }
    if (!done.insert(cls).second) continue;
    const auto& images = by_class[cls];
    std::size_t supply = 0;
    for (const auto& [img, ids] : images) supply += ids.size();
    if (supply < k) {
      throw Error(ErrorCode::kInsufficientInstances,
                  "class " + std::to_string(cls) + " has " +
                      std::to_string(supply) + " instances, need " +
                      std::to_string(k));
    }
    std::vector<ImageId> order;
    order.reserve(images.size());
    for (const auto& [img, ids] : images) order.push_back(img);
    Shuffle(order, rng);

    auto& sampled = seed.provenance[cls];
    for (ImageId img : order) {
      if (sampled.size() >= k) break;
      const auto& ids = images.at(img);
      sampled.insert(sampled.end(), ids.begin(), ids.end());
      chosen.insert(ids.begin(), ids.end());
      chosen_images.insert(img);
    }
  }

  seed.subset.categories = full.categories;
  for (const auto& img : full.images) {
    if (chosen_images.contains(img.id)) seed.subset.images.push_back(img);
  }
  for (const auto& ann : full.annotations) {
    if (chosen.contains(ann.id)) seed.subset.annotations.push_back(ann);
  }
  return seed;
}

std::string SerializeSeed(const KShotSeed& seed) {
  json root = AnnotationSetJson(seed.subset);
  json sampled = json::object();
  for (const auto& [cls, ids] : seed.provenance) {
    sampled[std::to_string(cls)] = ids;
  }
  root["provenance"] = {{"k", seed.k},
                        {"rng_seed", seed.rng_seed},
                        {"sampled", std::move(sampled)}};
  return root.dump(1) + "\n";
}

MissingStats MissingAnnotationStats(const AnnotationSet& full,
                                    const AnnotationSet& subset) {
  const std::set<ImageId> full_images = full.image_ids();
  for (const auto& img : subset.images) {
    if (!full_images.contains(img.id)) {
      throw Error(ErrorCode::kSubsetNotContained,
                  "subset image " + std::to_string(img.id) +
                      " is not in the full set");
    }
  }
  std::unordered_map<AnnotationId, const Annotation*> full_anns;
  for (const auto& ann : full.annotations) full_anns.emplace(ann.id, &ann);
  std::unordered_set<AnnotationId> kept;
  for (const auto& ann : subset.annotations) {
    auto it = full_anns.find(ann.id);
    if (it == full_anns.end() || it->second->image_id != ann.image_id ||
        it->second->class_id != ann.class_id) {
      throw Error(ErrorCode::kSubsetNotContained,
                  "subset annotation " + std::to_string(ann.id) +
                      " does not match the full set");
    }
    if (!ann.iscrowd) kept.insert(ann.id);
  }

  MissingStats stats;
  for (const auto& cat : full.categories) stats.per_class[cat.id] = 0;
  std::map<ImageId, ImageMissing> per_image;
  for (const auto& img : subset.images) per_image[img.id].image_id = img.id;
  for (const auto& ann : full.annotations) {
    if (ann.iscrowd) continue;
    auto it = per_image.find(ann.image_id);
    if (it == per_image.end()) continue;
    ++it->second.full;
    if (kept.contains(ann.id)) {
      ++it->second.kept;
    } else {
      ++it->second.missing;
      ++stats.per_class[ann.class_id];
    }
  }
  for (const auto& [id, row] : per_image) stats.per_image.push_back(row);
  return stats;
}

ConfidenceInterval AggregateCi(std::span<const double> values) {
  if (values.size() < 2) {
    throw Error(ErrorCode::kTooFewSamples,
                "confidence interval needs at least 2 values");
  }
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  boost::math::students_t dist(n - 1.0);
  const double t = boost::math::quantile(dist, 0.975);
  const double half = t * sd / std::sqrt(n);
  return {mean, mean - half, mean + half};
}

void WriteMissingCsv(const MissingStats& stats,
                     std::span<const Category> categories, std::ostream& out) {
  out << "class_id,class_name,missing_count\n";
  for (const auto& cat : categories) {
    auto it = stats.per_class.find(cat.id);
    out << cat.id << ',' << cat.name << ','
        << (it == stats.per_class.end() ? 0 : it->second) << '\n';
  }
}

void WriteAggregateCsv(const std::map<ClassId, ConfidenceInterval>& rows,
                       std::ostream& out) {
  out << "class_id,mean,ci_low,ci_high\n";
  for (const auto& [cls, ci] : rows) {
    out << cls << ',' << FormatDouble(ci.mean) << ',' << FormatDouble(ci.low)
        << ',' << FormatDouble(ci.high) << '\n';
  }
}

}  // namespace riscore

#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "crosshair/error.hpp"
#include "crosshair/grid.hpp"
#include "crosshair/zoo.hpp"

namespace crosshair {

// Zoo file contents: the registered models and the server granularity.
//
//   {"models": [{"id", "name", "accuracy", "latency_ms", "num_classes"}, ...],
//    "granularity": {"acc_g", "lat_g", "l_up_ms"}}
struct ZooDocument {
  std::vector<ModelProfile> models;
  GranularityConfig granularity;
};

namespace detail {

template <class T>
T required(const nlohmann::json& obj, const char* key, const char* where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw ValidationError(std::string(where) + ": missing field '" + key + "'");
  }
  try {
    return obj.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ValidationError(std::string(where) + ": field '" + key + "' has the wrong type");
  }
}

}  // namespace detail

inline ZooDocument parse_zoo(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ValidationError("zoo: document must be a JSON object");
  if (!doc.contains("models") || !doc.at("models").is_array()) {
    throw ValidationError("zoo: 'models' must be a list");
  }
  ZooDocument out;
  for (const auto& m : doc.at("models")) {
    ModelProfile p;
    p.id = detail::required<std::string>(m, "id", "zoo model");
    p.name = detail::required<std::string>(m, "name", "zoo model");
    p.accuracy = detail::required<double>(m, "accuracy", "zoo model");
    p.latency_ms = detail::required<double>(m, "latency_ms", "zoo model");
    p.num_classes = detail::required<int>(m, "num_classes", "zoo model");
    p.validate();
    out.models.push_back(std::move(p));
  }
  const auto& g = doc.contains("granularity") ? doc.at("granularity") : nlohmann::json();
  out.granularity.acc_g = detail::required<double>(g, "acc_g", "zoo granularity");
  out.granularity.lat_g = detail::required<double>(g, "lat_g", "zoo granularity");
  out.granularity.l_up = detail::required<double>(g, "l_up_ms", "zoo granularity");
  out.granularity.validate();
  return out;
}

inline ZooDocument load_zoo(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open zoo file '" + path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("zoo file '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_zoo(doc);
}

inline nlohmann::ordered_json zoo_to_json(const std::vector<ModelProfile>& models, const GranularityConfig& g) {
  nlohmann::ordered_json doc;
  doc["models"] = nlohmann::ordered_json::array();
  for (const auto& m : models) {
    doc["models"].push_back({{"id", m.id},
                             {"name", m.name},
                             {"accuracy", m.accuracy},
                             {"latency_ms", m.latency_ms},
                             {"num_classes", m.num_classes}});
  }
  doc["granularity"] = {{"acc_g", g.acc_g}, {"lat_g", g.lat_g}, {"l_up_ms", g.l_up}};
  return doc;
}

}  // namespace crosshair

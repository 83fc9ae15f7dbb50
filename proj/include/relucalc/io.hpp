#pragma once

// Network and report serialization. Network files are JSON with row-major
// weight arrays; floats use the shortest round-trip decimal encoding, so
// serialize -> parse -> serialize is byte-identical. Writes go through a
// temporary file and a rename.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "relucalc/bounds.hpp"
#include "relucalc/core.hpp"

namespace relucalc {

using json = nlohmann::ordered_json;

inline constexpr int kNetworkFileVersion = 1;

inline json network_to_json(const Network& net) {
  json j;
  j["version"] = kNetworkFileVersion;
  j["layers"] = json::array();
  for (const Layer& layer : net.layers) {
    json jl;
    jl["rows"] = layer.weights.rows;
    jl["cols"] = layer.weights.cols;
    jl["weights"] = layer.weights.data;
    jl["bias"] = layer.bias;
    j["layers"].push_back(std::move(jl));
  }
  return j;
}

inline Network network_from_json(const json& j) {
  Network net;
  try {
    if (!j.contains("version") || j.at("version").get<int>() != kNetworkFileVersion)
      throw parse_error("network file: missing or unsupported version");
    if (!j.contains("layers") || !j.at("layers").is_array() || j.at("layers").empty())
      throw parse_error("network file: missing layers");
    size_t index = 0;
    for (const json& jl : j.at("layers")) {
      ++index;
      const std::string where = "network file: layer " + std::to_string(index);
      if (!jl.contains("rows") || !jl.contains("cols") || !jl.contains("weights") || !jl.contains("bias"))
        throw parse_error(where + ": missing field");
      Layer layer;
      layer.weights.rows = jl.at("rows").get<int64_t>();
      layer.weights.cols = jl.at("cols").get<int64_t>();
      layer.weights.data = jl.at("weights").get<std::vector<double>>();
      layer.bias = jl.at("bias").get<std::vector<double>>();
      if (static_cast<int64_t>(layer.weights.data.size()) != layer.weights.rows * layer.weights.cols)
        throw parse_error(where + ": weights array has wrong length");
      if (static_cast<int64_t>(layer.bias.size()) != layer.weights.rows)
        throw parse_error(where + ": bias array has wrong length");
      net.layers.push_back(std::move(layer));
    }
  } catch (const json::exception& e) {
    throw parse_error(std::string("network file: ") + e.what());
  }
  try {
    validate(net);
  } catch (const shape_error& e) {
    throw parse_error(std::string("network file: ") + e.what());
  }
  return net;
}

// Atomic text write: temporary file in the target directory, then rename.
inline void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw error("cannot open " + tmp.string() + " for writing");
    out << content;
    if (!out) throw error("write failed: " + tmp.string());
  }
  fs::rename(tmp, target);
}

inline void save_network(const Network& net, const std::string& path) {
  write_file_atomic(path, network_to_json(net).dump(2) + "\n");
}

inline Network load_network(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw error("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw parse_error(path + ": " + e.what());
  }
  return network_from_json(j);
}

inline json metrics_to_json(const Metrics& m) {
  json j;
  j["param_count"] = m.param_count;
  j["length"] = m.length;
  j["hidden_length"] = m.hidden_length;
  j["dims"] = m.dims;
  j["size_norm"] = m.size_norm;
  j["in_size"] = m.in_size;
  j["out_size"] = m.out_size;
  j["ent"] = m.ent;
  return j;
}

inline json report_to_json(const BoundReport& report) {
  json j;
  j["construction"] = report.construction;
  j["measured"] = {{"param_count", report.measured_param},
                   {"length", report.measured_length},
                   {"size_norm", report.measured_size}};
  j["bounds"] = json::array();
  for (const BoundClaim& c : report.claims) {
    json jc;
    jc["name"] = c.name;
    jc["formula"] = c.formula;
    jc["claimed"] = c.claimed;
    if (c.measured) jc["measured"] = *c.measured;
    jc["status"] = c.checked ? (c.pass ? "pass" : "fail") : "unchecked";
    j["bounds"].push_back(std::move(jc));
  }
  j["all_pass"] = report.all_pass();
  return j;
}

// Flat table with one row per bound claim.
inline std::string report_to_csv(const BoundReport& report) {
  std::ostringstream out;
  out << "construction,bound,formula,claimed,measured,status\n";
  for (const BoundClaim& c : report.claims) {
    out << report.construction << ',' << c.name << ",\"" << c.formula << "\",";
    out << json(c.claimed).dump() << ',';
    if (c.measured)
      out << json(*c.measured).dump();
    out << ',' << (c.checked ? (c.pass ? "pass" : "fail") : "unchecked") << '\n';
  }
  return out.str();
}

}  // namespace relucalc

#pragma once

// Deterministic text output: shortest round-trip number formatting, a
// content digest for provenance, and CSV writers whose first line is a
// '#'-prefixed JSON provenance record.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <nlohmann/json.hpp>

#include "grwa/error.hpp"
#include "grwa/model.hpp"
#include "grwa/observables.hpp"
#include "grwa/phase_space.hpp"

#ifndef GRWA_VERSION
#define GRWA_VERSION "0.1.0"
#endif

namespace grwa::io {

using json = nlohmann::ordered_json;

inline constexpr std::string_view code_version = GRWA_VERSION;

/// Shortest decimal string that parses back to exactly `v`.
inline std::string format_double(double v) {
  if (v == 0.0) v = 0.0;  // drop the sign of negative zero
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  require(ec == std::errc{}, errc::io, "format_double: conversion failed");
  return std::string(buf, end);
}

/// 64-bit FNV-1a, as 16 lowercase hex digits.
inline std::string digest(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = hex[h & 0xf];
    h >>= 4;
  }
  return out;
}

inline json params_json(const model_params& p) {
  return json{{"omega", p.omega()}, {"delta", p.delta()}, {"lambda", p.lambda()}, {"x", p.x()},
              {"delta_tilde", p.delta_tilde()}};
}

// Common provenance fields; callers add their own entries.
inline json provenance(std::string_view config_digest, int truncation) {
  return json{{"code_version", code_version}, {"config_digest", config_digest}, {"truncation", truncation}};
}

inline json grid_header(const phase_grid& g, const json& prov) {
  json h = prov;
  h["kind"] = to_string(g.kind);
  h["t"] = g.t;
  h["extent"] = g.extent;
  h["resolution"] = g.resolution;
  h["cell_area"] = g.cell_area();
  h["params"] = params_json(g.params);
  return h;
}

class csv_writer {
 public:
  csv_writer(const json& header, std::vector<std::string> columns) {
    out_ << "# " << header.dump() << '\n';
    for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
    out_ << '\n';
  }

  void row(std::initializer_list<double> values) {
    bool first = true;
    for (double v : values) {
      out_ << (first ? "" : ",") << format_double(v);
      first = false;
    }
    out_ << '\n';
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
  }

  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  require(static_cast<bool>(f), errc::io, "cannot open " + path + " for writing");
  f << text;
  require(static_cast<bool>(f), errc::io, "write failed for " + path);
}

/// CSV with columns re_beta, im_beta, value.
inline std::string grid_csv(const phase_grid& g, const json& prov) {
  csv_writer w(grid_header(g, prov), {"re_beta", "im_beta", "value"});
  for (int row = 0; row < g.resolution; ++row)
    for (int col = 0; col < g.resolution; ++col) w.row({g.coordinate(col), g.coordinate(row), g(row, col)});
  return w.str();
}

/// CSV with columns time, value.
inline std::string series_csv(const observable_series& s, const json& prov) {
  json h = prov;
  h["label"] = s.label;
  if (!s.params_digest.empty()) h["params_digest"] = s.params_digest;
  csv_writer w(h, {"time", s.label});
  for (std::size_t i = 0; i < s.size(); ++i) w.row({s.times[i], s.values[i]});
  return w.str();
}

inline json error_json(const error& e) {
  return json{{"error", json{{"code", to_string(e.code())}, {"message", e.what()}}}};
}

}  // namespace grwa::io

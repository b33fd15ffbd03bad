// SPDX-License-Identifier: Apache-2.0
//
// Columnar text formats for intensity sets and recovered samples.
//
// Intensity set (one row per triple, companions in lattice units):
//
//   # holoshot intensities schema=1 variant=plane axis=1 dim=2
//   level,k_1,k_2,kp_1,kp_2,kpp_1,kpp_2,I_k,I_kp,I_kpp
//
// Recovered samples (one row per lattice index):
//
//   # holoshot recovered schema=1 dim=2
//   level,k_1,k_2,re,im,mu,valid
//
// Reals are written in shortest round-trip form, so a file read back
// reproduces the in-memory values bit for bit.
#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "holoshot/error.hpp"
#include "holoshot/lattice.hpp"
#include "holoshot/measure.hpp"
#include "holoshot/recover.hpp"

namespace holoshot::io {

inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace detail {

inline std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <typename T>
T parse_number(std::string_view s, std::size_t line_no) {
  T value{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw Error(ErrorCode::kParse,
                "line " + std::to_string(line_no) + ": bad number '" + std::string(s) + "'");
  }
  return value;
}

/// key=value pairs of a "# holoshot <kind> ..." header line.
inline std::map<std::string, std::string> parse_header(const std::string& line,
                                                       std::string_view kind) {
  const std::string prefix = "# holoshot " + std::string(kind);
  if (line.rfind(prefix, 0) != 0) {
    throw Error(ErrorCode::kParse, "missing '" + prefix + "' header");
  }
  std::map<std::string, std::string> kv;
  std::istringstream in(line.substr(prefix.size()));
  std::string tok;
  while (in >> tok) {
    const auto eq = tok.find('=');
    if (eq != std::string::npos) kv[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  if (kv["schema"] != "1") throw Error(ErrorCode::kParse, "unsupported schema");
  return kv;
}

inline void write_index_columns(std::ostream& out, std::string_view name, std::size_t dim) {
  for (std::size_t l = 0; l < dim; ++l) out << ',' << name << '_' << (l + 1);
}

}  // namespace detail

inline void write_intensities(std::ostream& out, const std::vector<IntensityRecord>& records,
                              const TripleVariant& variant, std::size_t dim) {
  out << "# holoshot intensities schema=1 variant="
      << (variant.kind == TripleKind::kPlane ? "plane" : "spherical")
      << " axis=" << (variant.axis + 1) << " dim=" << dim << '\n';
  out << "level";
  detail::write_index_columns(out, "k", dim);
  detail::write_index_columns(out, "kp", dim);
  detail::write_index_columns(out, "kpp", dim);
  out << ",I_k,I_kp,I_kpp\n";
  for (const auto& r : records) {
    out << r.level;
    for (auto v : r.triple.k) out << ',' << v;
    for (double v : r.triple.plus.lattice_units(r.level)) out << ',' << format_double(v);
    for (double v : r.triple.minus.lattice_units(r.level)) out << ',' << format_double(v);
    out << ',' << format_double(r.base) << ',' << format_double(r.plus) << ','
        << format_double(r.minus) << '\n';
  }
}

struct IntensityFile {
  TripleVariant variant;
  std::size_t dim = 0;
  std::vector<IntensityRecord> records;

  /// Records of one level, in file order.
  std::vector<IntensityRecord> level(int n) const {
    std::vector<IntensityRecord> out;
    for (const auto& r : records) {
      if (r.level == n) out.push_back(r);
    }
    return out;
  }
};

/// Reads an intensity set. Triples are rebuilt from k, the level and the
/// variant; the stored companion columns must match them exactly.
inline IntensityFile read_intensities(std::istream& in) {
  IntensityFile file;
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::kParse, "empty intensity file");
  auto kv = detail::parse_header(line, "intensities");
  try {
    file.dim = std::stoul(kv.at("dim"));
    const std::size_t axis = std::stoul(kv.at("axis"));
    if (axis == 0) throw Error(ErrorCode::kParse, "axis is 1-based");
    if (kv.at("variant") == "plane") {
      file.variant = TripleVariant::plane(axis - 1);
    } else if (kv.at("variant") == "spherical") {
      file.variant = TripleVariant::spherical();
    } else {
      throw Error(ErrorCode::kParse, "unknown variant '" + kv.at("variant") + "'");
    }
  } catch (const std::out_of_range&) {
    throw Error(ErrorCode::kParse, "intensity header lacks variant/axis/dim");
  } catch (const std::invalid_argument&) {
    throw Error(ErrorCode::kParse, "malformed intensity header");
  }
  if (file.dim == 0 || file.dim > kMaxDim) throw Error(ErrorCode::kParse, "bad dimension");
  std::getline(in, line);  // column names
  const std::size_t d = file.dim;
  const std::size_t columns = 1 + 3 * d + 3;
  std::size_t line_no = 2;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = detail::split(line, ',');
    if (cells.size() != columns) {
      throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) + ": expected " +
                                         std::to_string(columns) + " columns");
    }
    IntensityRecord r;
    r.level = detail::parse_number<int>(cells[0], line_no);
    check_level(r.level);
    Index k(d);
    for (std::size_t l = 0; l < d; ++l) {
      k[l] = detail::parse_number<std::int64_t>(cells[1 + l], line_no);
    }
    r.triple = make_triple(k, r.level, file.variant);
    const Point kp = r.triple.plus.lattice_units(r.level);
    const Point kpp = r.triple.minus.lattice_units(r.level);
    for (std::size_t l = 0; l < d; ++l) {
      if (detail::parse_number<double>(cells[1 + d + l], line_no) != kp[l] ||
          detail::parse_number<double>(cells[1 + 2 * d + l], line_no) != kpp[l]) {
        throw Error(ErrorCode::kInconsistentRecords,
                    "line " + std::to_string(line_no) + ": companions do not match variant");
      }
    }
    r.base = detail::parse_number<double>(cells[1 + 3 * d], line_no);
    r.plus = detail::parse_number<double>(cells[2 + 3 * d], line_no);
    r.minus = detail::parse_number<double>(cells[3 + 3 * d], line_no);
    if (r.base < 0.0 || r.plus < 0.0 || r.minus < 0.0) {
      throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) + ": negative intensity");
    }
    file.records.push_back(r);
  }
  return file;
}

inline void write_recovered_header(std::ostream& out, std::size_t dim) {
  out << "# holoshot recovered schema=1 dim=" << dim << '\n';
  out << "level";
  detail::write_index_columns(out, "k", dim);
  out << ",re,im,mu,valid\n";
}

/// Rows for every index of the samples' box, in row-major order.
inline void write_recovered_rows(std::ostream& out, const RecoveredSamples& s) {
  for (std::size_t i = 0; i < s.capacity(); ++i) {
    const Index k = s.at(i);
    out << s.level();
    for (auto v : k) out << ',' << v;
    const auto z = s.value_at(i);
    out << ',' << format_double(z.real()) << ',' << format_double(z.imag()) << ','
        << format_double(s.mu_at(i)) << ',' << (s.valid_at(i) ? 1 : 0) << '\n';
  }
}

inline void write_recovered(std::ostream& out, const std::vector<RecoveredSamples>& levels,
                            std::size_t dim) {
  write_recovered_header(out, dim);
  for (const auto& s : levels) write_recovered_rows(out, s);
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path + "'");
  return out;
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read '" + path + "'");
  return in;
}

}  // namespace holoshot::io

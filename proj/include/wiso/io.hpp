// Copyright 2026 The wiso Authors
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

/**
 * @file io.hpp
 *
 * @brief Text formats for spaces, measures and transport results.
 *
 * Space specs:
 *
 *     interval[:alpha]
 *     euclidean:<dim>
 *     finite:<path>                  (metric table, relative to the measure file)
 *     product:<alpha>:<q>:<base spec>
 *
 * Measure files start with `space <spec>` and list one atom per line as the
 * mass followed by the point's coordinates (`t`, then the base point on
 * product spaces; an index on finite spaces). Numbers are decimals or `p/q`.
 * `#` starts a comment.
 */

#ifndef WISO_IO_HPP_
#define WISO_IO_HPP_

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "wiso/error.hpp"
#include "wiso/measure.hpp"
#include "wiso/metric.hpp"
#include "wiso/scalar.hpp"
#include "wiso/transport.hpp"

namespace wiso {

/// Terminating decimals print as decimals, other fractions as `p/q`.
inline std::string format_exact(const Rational& r) {
  mpz_class den = r.get_den();
  std::size_t twos = 0, fives = 0;
  while (mpz_divisible_ui_p(den.get_mpz_t(), 2)) {
    den /= 2;
    ++twos;
  }
  while (mpz_divisible_ui_p(den.get_mpz_t(), 5)) {
    den /= 5;
    ++fives;
  }
  if (den != 1) return format_rational(r);
  const std::size_t digits = std::max(twos, fives);
  if (digits == 0) return r.get_num().get_str();
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, digits);
  mpz_class scaled = r.get_num() * scale / r.get_den();
  const bool negative = scaled < 0;
  if (negative) scaled = -scaled;
  std::string s = scaled.get_str();
  if (s.size() <= digits) s.insert(0, digits + 1 - s.size(), '0');
  s.insert(s.size() - digits, ".");
  return negative ? "-" + s : s;
}

template <Scalar T>
std::string format_value(const T& x) {
  if constexpr (ScalarTraits<T>::exact) {
    return format_exact(x);
  } else {
    return format_double(x);
  }
}

namespace detail {

struct Token {
  std::string text;
  std::size_t column;
};

inline std::vector<Token> split_tokens(const std::string& line) {
  std::vector<Token> out;
  std::size_t i = 0;
  const std::size_t end = std::min(line.find('#'), line.size());
  while (i < end) {
    while (i < end && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= end) break;
    const std::size_t start = i;
    while (i < end && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    out.push_back({line.substr(start, i - start), start + 1});
  }
  return out;
}

/// Number of coordinate fields of a point of `space`.
template <Scalar T>
std::size_t point_arity(const MetricSpace<T>& space) {
  switch (space.kind()) {
    case SpaceKind::Interval: return 1;
    case SpaceKind::Euclidean: return space.dim();
    case SpaceKind::Finite: return 1;
    case SpaceKind::Product: return 1 + point_arity(*space.base());
  }
  return 0;
}

template <Scalar T>
T parse_number(const Token& tok, std::size_t line) {
  auto v = scalar::parse<T>(tok.text);
  if (!v) throw ParseError("invalid number '" + tok.text + "'", line, tok.column);
  return *v;
}

template <Scalar T>
Point<T> parse_point(const MetricSpace<T>& space, const std::vector<Token>& toks,
                     std::size_t& pos, std::size_t line) {
  switch (space.kind()) {
    case SpaceKind::Interval: return Point<T>::interval(parse_number<T>(toks[pos++], line));
    case SpaceKind::Euclidean: {
      std::vector<T> coords;
      for (std::size_t k = 0; k < space.dim(); ++k) coords.push_back(parse_number<T>(toks[pos++], line));
      return Point<T>::euclidean(std::move(coords));
    }
    case SpaceKind::Finite: {
      const Token& tok = toks[pos++];
      auto r = parse_rational(tok.text);
      if (!r || r->get_den() != 1 || *r < 0 || !r->get_num().fits_ulong_p()) {
        throw ParseError("invalid point index '" + tok.text + "'", line, tok.column);
      }
      return Point<T>::finite(r->get_num().get_ui());
    }
    case SpaceKind::Product: {
      T t = parse_number<T>(toks[pos++], line);
      return Point<T>::product(t, parse_point(*space.base(), toks, pos, line));
    }
  }
  throw ParseError("unsupported space", line, 1);
}

inline std::vector<std::string> split_colon(std::string_view s, std::size_t max_parts) {
  std::vector<std::string> out;
  while (out.size() + 1 < max_parts) {
    auto c = s.find(':');
    if (c == std::string_view::npos) break;
    out.emplace_back(s.substr(0, c));
    s.remove_prefix(c + 1);
  }
  out.emplace_back(s);
  return out;
}

}  // namespace detail

/**
 * Builds a space from its spec; `finite:` paths are resolved against
 * `base_dir` when relative.
 */
template <Scalar T>
SpacePtr<T> parse_space_spec(std::string_view spec, const std::filesystem::path& base_dir = {},
                             double tol = kDefaultTol) {
  auto head = detail::split_colon(spec, 2);
  const std::string& kind = head[0];
  auto bad = [&](const std::string& why) {
    return DomainError("invalid space spec '" + std::string(spec) + "': " + why);
  };
  if (kind == "interval") {
    if (head.size() == 1) return MetricSpace<T>::interval();
    return MetricSpace<T>::interval(Exponent::parse(head[1]));
  }
  if (kind == "euclidean") {
    if (head.size() != 2) throw bad("expected euclidean:<dim>");
    auto r = parse_rational(head[1]);
    if (!r || r->get_den() != 1 || *r < 1 || !r->get_num().fits_ulong_p()) {
      throw bad("dimension must be a positive integer");
    }
    return MetricSpace<T>::euclidean(r->get_num().get_ui());
  }
  if (kind == "finite") {
    if (head.size() != 2 || head[1].empty()) throw bad("expected finite:<path>");
    std::filesystem::path path(head[1]);
    if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
    std::ifstream in(path);
    if (!in) throw bad("cannot open '" + path.string() + "'");
    return parse_finite_space<T>(in, tol, head[1]);
  }
  if (kind == "product") {
    auto parts = detail::split_colon(spec, 4);
    if (parts.size() != 4) throw bad("expected product:<alpha>:<q>:<base>");
    return MetricSpace<T>::product(Exponent::parse(parts[1]), Exponent::parse(parts[2]),
                                   parse_space_spec<T>(parts[3], base_dir, tol));
  }
  throw bad("unknown kind '" + kind + "'");
}

template <Scalar T>
struct MeasureFile {
  std::string space_spec;
  DiscreteMeasure<T> measure;
};

template <Scalar T>
MeasureFile<T> read_measure(std::istream& in, const std::filesystem::path& base_dir = {},
                            double tol = kDefaultTol) {
  std::string line;
  std::size_t line_no = 0;
  std::string spec;
  SpacePtr<T> space;
  std::size_t arity = 0;
  std::vector<Atom<T>> atoms;
  while (std::getline(in, line)) {
    ++line_no;
    auto toks = detail::split_tokens(line);
    if (toks.empty()) continue;
    if (!space) {
      if (toks[0].text != "space" || toks.size() != 2) {
        throw ParseError("expected header 'space <spec>'", line_no, toks[0].column);
      }
      spec = toks[1].text;
      try {
        space = parse_space_spec<T>(spec, base_dir, tol);
      } catch (const ParseError&) {
        throw;
      } catch (const Error& e) {
        throw ParseError(e.what(), line_no, toks[1].column);
      }
      arity = detail::point_arity(*space);
      continue;
    }
    if (toks.size() != arity + 1) {
      throw ParseError("expected " + std::to_string(arity + 1) + " fields, found " +
                           std::to_string(toks.size()),
                       line_no, toks[std::min(toks.size() - 1, arity + 1)].column);
    }
    T mass = detail::parse_number<T>(toks[0], line_no);
    std::size_t pos = 1;
    Point<T> p = detail::parse_point(*space, toks, pos, line_no);
    if (!space->contains(p)) {
      throw ParseError("point " + p.str() + " is not in " + space->spec(), line_no,
                       toks[1].column);
    }
    if (mass < T(0)) throw ParseError("negative mass", line_no, toks[0].column);
    atoms.push_back({std::move(p), mass});
  }
  if (!space) throw ParseError("missing header 'space <spec>'", line_no + 1, 1);
  if (atoms.empty()) throw ParseError("measure has no atoms", line_no + 1, 1);
  try {
    return {spec, DiscreteMeasure<T>(space, std::move(atoms), tol)};
  } catch (const DomainError& e) {
    throw ParseError(e.what(), line_no + 1, 1);
  }
}

template <Scalar T>
MeasureFile<T> read_measure_file(const std::filesystem::path& path, double tol = kDefaultTol) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'", 0, 0);
  try {
    return read_measure<T>(in, path.parent_path(), tol);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ":" + e.what(), 0, 0);
  }
}

template <Scalar T>
void append_point_fields(const Point<T>& p, std::vector<std::string>& out) {
  switch (p.kind()) {
    case PointKind::Interval: out.push_back(format_value(p.t())); break;
    case PointKind::Euclidean:
      for (const auto& x : p.coords()) out.push_back(format_value(x));
      break;
    case PointKind::Finite: out.push_back(std::to_string(p.index())); break;
    case PointKind::Product:
      out.push_back(format_value(p.t()));
      append_point_fields(p.base(), out);
      break;
  }
}

template <Scalar T>
void write_measure(std::ostream& out, const DiscreteMeasure<T>& mu, const std::string& spec) {
  out << "space " << spec << '\n';
  for (const auto& a : mu.atoms()) {
    std::vector<std::string> fields{format_value(a.mass)};
    append_point_fields(a.point, fields);
    for (std::size_t i = 0; i < fields.size(); ++i) out << (i ? " " : "") << fields[i];
    out << '\n';
  }
}

template <Scalar T>
std::string format_measure(const DiscreteMeasure<T>& mu, const std::string& spec) {
  std::ostringstream os;
  write_measure(os, mu, spec);
  return os.str();
}

template <Scalar T>
nlohmann::json transport_result_json(const TransportResult<T>& r) {
  nlohmann::json j;
  j["p"] = r.p.str();
  j["cost"] = r.cost;
  j["powered_cost"] = format_value(r.powered_cost);
  j["certified"] = r.certified;
  j["duality_gap"] = scalar::to_double(r.duality_gap);
  j["pivots"] = r.pivots;
  nlohmann::json plan = nlohmann::json::array();
  for (const auto& t : r.coupling.triplets()) {
    plan.push_back({{"from", r.coupling.rows()[t.row].point.str()},
                    {"to", r.coupling.cols()[t.col].point.str()},
                    {"mass", format_value(t.weight)}});
  }
  j["coupling"] = std::move(plan);
  if (r.duals) {
    nlohmann::json u = nlohmann::json::array(), v = nlohmann::json::array();
    for (std::size_t i = 0; i < r.duals->u.size(); ++i) {
      u.push_back({{"point", r.coupling.rows()[i].point.str()},
                   {"value", format_value(r.duals->u[i])}});
    }
    for (std::size_t k = 0; k < r.duals->v.size(); ++k) {
      v.push_back({{"point", r.coupling.cols()[k].point.str()},
                   {"value", format_value(r.duals->v[k])}});
    }
    j["potentials"] = {{"u", std::move(u)}, {"v", std::move(v)}};
  }
  return j;
}

template <Scalar T>
void write_transport_result(std::ostream& out, const TransportResult<T>& r) {
  out << "p " << r.p.str() << '\n';
  out << "cost " << format_double(r.cost) << '\n';
  out << "powered_cost " << format_value(r.powered_cost) << '\n';
  out << "certified " << (r.certified ? "true" : "false") << '\n';
  out << "duality_gap " << format_double(scalar::to_double(r.duality_gap)) << '\n';
  out << "coupling\n";
  for (const auto& t : r.coupling.triplets()) {
    out << "  " << r.coupling.rows()[t.row].point.str() << " -> "
        << r.coupling.cols()[t.col].point.str() << " : " << format_value(t.weight) << '\n';
  }
  if (r.duals) {
    out << "potentials\n";
    for (std::size_t i = 0; i < r.duals->u.size(); ++i) {
      out << "  u " << r.coupling.rows()[i].point.str() << " " << format_value(r.duals->u[i])
          << '\n';
    }
    for (std::size_t k = 0; k < r.duals->v.size(); ++k) {
      out << "  v " << r.coupling.cols()[k].point.str() << " " << format_value(r.duals->v[k])
          << '\n';
    }
  }
}

}  // namespace wiso

#endif  // WISO_IO_HPP_

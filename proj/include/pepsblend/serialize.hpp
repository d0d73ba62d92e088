#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "pepsblend/peps.hpp"
#include "pepsblend/permanent.hpp"
#include "pepsblend/reduction.hpp"

namespace pepsblend {

using nlohmann::json;

// Text formats, normative across implementations:
//   Rational            "p/q" (always with the denominator)
//   ComplexRational     {"re": "p/q", "im": "p/q"}
//   prime-field scalar  decimal string, modulus declared once per instance
//   polynomial          coefficient array, ascending degree
// PEPS tensors are per-vertex flat arrays: physical index slowest, then the
// present virtual legs in Up, Right, Down, Left order, each row-major.

inline json to_json(const Rational& r) { return r.to_string(); }
inline json to_json(const ComplexRational& z) {
  return json{{"re", z.re().to_string()}, {"im", z.im().to_string()}};
}
inline json to_json(const PrimeFieldElement& x) { return std::to_string(x.value()); }

inline Rational rational_from_json(const json& j) {
  if (!j.is_string()) throw IoError("expected a \"p/q\" string");
  return Rational::parse(j.get<std::string>());
}
inline ComplexRational complex_from_json(const json& j) {
  if (!j.is_object() || !j.contains("re") || !j.contains("im")) {
    throw IoError("expected {\"re\": \"p/q\", \"im\": \"p/q\"}");
  }
  return {rational_from_json(j.at("re")), rational_from_json(j.at("im"))};
}
inline PrimeFieldElement prime_from_json(const json& j, std::uint64_t q) {
  if (j.is_string()) return {std::stoull(j.get<std::string>()), q};
  if (j.is_number_unsigned()) return {j.get<std::uint64_t>(), q};
  throw IoError("expected a decimal prime-field scalar");
}

template <FieldType F>
json polynomial_to_json(const Polynomial<F>& p) {
  json arr = json::array();
  for (const auto& c : p.coeffs()) arr.push_back(to_json(c));
  return arr;
}

// --- PEPS instances ------------------------------------------------------

using PepsInstance = std::variant<PepsData<ComplexRational>, PepsData<PrimeFieldElement>>;

template <FieldType F>
json peps_to_json(const PepsData<F>& peps) {
  json j;
  if constexpr (std::same_as<F, PrimeFieldElement>) {
    j["field"] = json{{"kind", "prime"}, {"q", peps.tensors.at(0).at(0).modulus()}};
  } else {
    j["field"] = json{{"kind", "complex-rational"}};
  }
  j["lattice"] = json{{"width", peps.lattice.width}, {"height", peps.lattice.height}};
  j["d"] = peps.d;
  j["D"] = peps.D;
  j["translation_invariant"] = peps.translation_invariant;
  json tensors = json::array();
  for (const auto& t : peps.tensors) {
    json arr = json::array();
    for (const auto& z : t) arr.push_back(to_json(z));
    tensors.push_back(std::move(arr));
  }
  j["tensors"] = std::move(tensors);
  return j;
}

inline PepsInstance peps_from_json(const json& j) {
  try {
    std::string kind = "complex-rational";
    std::uint64_t q = 0;
    if (j.contains("field")) {
      kind = j.at("field").at("kind").get<std::string>();
      if (kind == "prime") q = j.at("field").at("q").get<std::uint64_t>();
    }
    LatticeSpec lattice{j.at("lattice").at("width").get<std::size_t>(),
                        j.at("lattice").at("height").get<std::size_t>()};
    const auto d = j.at("d").get<std::size_t>();
    const auto D = j.at("D").get<std::size_t>();
    const bool ti = j.value("translation_invariant", false);
    const auto& tensors = j.at("tensors");
    auto fill = [&](auto& peps, auto parse_entry) {
      peps.lattice = lattice;
      peps.d = d;
      peps.D = D;
      peps.translation_invariant = ti;
      for (const auto& t : tensors) {
        std::vector<std::decay_t<decltype(parse_entry(t.front()))>> entries;
        entries.reserve(t.size());
        for (const auto& e : t) entries.push_back(parse_entry(e));
        peps.tensors.push_back(std::move(entries));
      }
      peps.validate();
    };
    if (kind == "prime") {
      PepsData<PrimeFieldElement> peps;
      fill(peps, [&](const json& e) { return prime_from_json(e, q); });
      return peps;
    }
    if (kind != "complex-rational") throw IoError("unknown field kind: " + kind);
    PepsData<ComplexRational> peps;
    fill(peps, [&](const json& e) { return complex_from_json(e); });
    return peps;
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed PEPS instance: ") + e.what());
  }
}

// --- observables and matrices -------------------------------------------

inline LocalObservable<ComplexRational> observable_from_json(const json& j) {
  try {
    LocalObservable<ComplexRational> obs;
    for (const auto& v : j.at("support")) obs.support.push_back(v.get<std::size_t>());
    for (const auto& e : j.at("matrix")) obs.matrix.push_back(complex_from_json(e));
    return obs;
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed observable: ") + e.what());
  }
}

template <FieldType F>
json observable_to_json(const LocalObservable<F>& obs) {
  json j;
  j["support"] = obs.support;
  json m = json::array();
  for (const auto& e : obs.matrix) m.push_back(to_json(e));
  j["matrix"] = std::move(m);
  return j;
}

inline json matrix_to_json(const SquareMatrix<PrimeFieldElement>& m) {
  json j;
  j["field"] = json{{"kind", "prime"}, {"q", m.a.at(0).modulus()}};
  j["n"] = m.n;
  json rows = json::array();
  for (std::size_t i = 0; i < m.n; ++i) {
    json row = json::array();
    for (std::size_t c = 0; c < m.n; ++c) row.push_back(to_json(m.at(i, c)));
    rows.push_back(std::move(row));
  }
  j["entries"] = std::move(rows);
  return j;
}

inline SquareMatrix<PrimeFieldElement> matrix_from_json(const json& j) {
  try {
    const auto q = j.at("field").at("q").get<std::uint64_t>();
    SquareMatrix<PrimeFieldElement> m;
    m.n = j.at("n").get<std::size_t>();
    for (const auto& row : j.at("entries")) {
      for (const auto& e : row) m.a.push_back(prime_from_json(e, q));
    }
    m.validate();
    return m;
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed matrix: ") + e.what());
  }
}

// --- reduction reports ----------------------------------------------------

inline json report_to_json(const ReductionReport& r) {
  json j;
  j["variant"] = r.variant;
  j["lattice"] = json{{"width", r.width}, {"height", r.height}};
  j["N"] = r.n_vertices;
  j["d"] = r.d;
  j["D"] = r.D;
  j["degree"] = r.degree;
  j["k"] = r.k;
  j["repeats_requested"] = r.repeats_requested;
  j["repeats_executed"] = r.repeats_executed;
  j["delta"] = r.delta.to_string();
  j["eps"] = r.eps.to_string();
  json pts = json::array();
  for (const auto& t : r.points) pts.push_back(t.to_string());
  j["sample_points"] = std::move(pts);
  json reps = json::array();
  for (const auto& rec : r.repeats) {
    json rj;
    rj["seed"] = rec.seed;
    rj["correct_answers"] = rec.correct_answers;
    rj["decoded"] = rec.decoded;
    if (!rec.failure.empty()) rj["failure"] = rec.failure;
    if (rec.candidate) rj["candidate"] = to_json(*rec.candidate);
    reps.push_back(std::move(rj));
  }
  j["repeats"] = std::move(reps);
  if (r.recovered) j["recovered"] = polynomial_to_json(*r.recovered);
  if (r.value) j["value"] = to_json(*r.value);
  j["success"] = r.success;
  j["outcome"] = r.outcome;
  if (r.bound_decimal) j["bound"] = *r.bound_decimal;
  j["master_seed"] = r.master_seed;
  return j;
}

// --- files -----------------------------------------------------------------

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw IoError(std::string("cannot parse ") + path + ": " + e.what());
  }
  return j;
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << content;
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace pepsblend

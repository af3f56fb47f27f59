#include "bfcalc/io.hpp"

#include <set>

namespace bfcalc {

namespace {

void require_keys(const Json& j, const std::set<std::string>& allowed, const std::string& what) {
  if (!j.is_object()) throw SpecError(what + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) throw SpecError(what + ": unknown key \"" + it.key() + "\"");
}

double number(const Json& j, const std::string& key, const std::string& what, std::optional<double> fallback = {}) {
  if (!j.contains(key) || j.at(key).is_null()) {
    if (fallback) return *fallback;
    throw SpecError(what + ": missing \"" + key + "\"");
  }
  if (!j.at(key).is_number()) throw SpecError(what + ": \"" + key + "\" must be a number");
  return j.at(key).get<double>();
}

Json finite_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

}  // namespace

BernsteinFn parse_psi(const Json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) throw SpecError("psi: missing \"kind\"");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "affine") {
    require_keys(j, {"kind", "a", "b"}, "affine");
    return BernsteinFn::affine(number(j, "a", kind, 0.0), number(j, "b", kind, 0.0));
  }
  if (kind == "power") {
    require_keys(j, {"kind", "alpha"}, "power");
    return BernsteinFn::power(number(j, "alpha", kind));
  }
  if (kind == "log1p") {
    require_keys(j, {"kind"}, "log1p");
    return BernsteinFn::log1p();
  }
  if (kind == "one_minus_exp") {
    require_keys(j, {"kind", "c", "r"}, "one_minus_exp");
    return BernsteinFn::one_minus_exp(number(j, "c", kind, 1.0), number(j, "r", kind, 1.0));
  }
  if (kind == "sum") {
    require_keys(j, {"kind", "terms"}, "sum");
    if (!j.contains("terms") || !j.at("terms").is_array()) throw SpecError("sum: \"terms\" must be an array");
    std::vector<BernsteinFn> terms;
    for (const auto& t : j.at("terms")) terms.push_back(parse_psi(t));
    return BernsteinFn::sum(std::move(terms));
  }
  if (kind == "compose") {
    require_keys(j, {"kind", "outer", "inner"}, "compose");
    if (!j.contains("outer") || !j.contains("inner")) throw SpecError("compose: needs \"outer\" and \"inner\"");
    return BernsteinFn::compose(parse_psi(j.at("outer")), parse_psi(j.at("inner")));
  }
  if (kind == "levy") {
    require_keys(j, {"kind", "a", "b", "atoms", "segments"}, "levy");
    LevyTriple t;
    t.a = number(j, "a", kind, 0.0);
    t.b = number(j, "b", kind, 0.0);
    RadonMeasure mu;
    if (j.contains("atoms")) {
      if (!j.at("atoms").is_array()) throw SpecError("levy: \"atoms\" must be an array");
      std::vector<Atom> atoms;
      for (const auto& a : j.at("atoms")) {
        if (!a.is_array() || a.size() != 2 || !a[0].is_number() || !a[1].is_number())
          throw SpecError("levy: atoms are [location, mass] pairs");
        atoms.push_back({a[0].get<double>(), a[1].get<double>()});
      }
      mu = mu + RadonMeasure(atoms, {});
    }
    if (j.contains("segments")) {
      if (!j.at("segments").is_array()) throw SpecError("levy: \"segments\" must be an array");
      RadonMeasure segs;
      for (const auto& s : j.at("segments")) {
        require_keys(s, {"lower", "upper", "coef", "power", "decay"}, "segment");
        const double lo = number(s, "lower", "segment", 0.0);
        const double hi = number(s, "upper", "segment", inf);
        segs = segs + RadonMeasure::from_term(lo, hi,
                                              {number(s, "coef", "segment"), number(s, "power", "segment", 0.0),
                                               number(s, "decay", "segment", 0.0)});
      }
      segs.validate(true);
      mu = mu + segs;
    }
    t.mu = mu;
    return BernsteinFn::levy(t);
  }
  throw SpecError("psi: unknown kind \"" + kind + "\"");
}

Json psi_to_json(const BernsteinFn& psi) {
  const auto& n = psi.node();
  using K = BernsteinFn::Kind;
  switch (n.kind) {
    case K::Affine: return {{"kind", "affine"}, {"a", n.a}, {"b", n.b}};
    case K::Power: return {{"kind", "power"}, {"alpha", n.alpha}};
    case K::Log1p: return {{"kind", "log1p"}};
    case K::OneMinusExp: return {{"kind", "one_minus_exp"}, {"c", n.c}, {"r", n.r}};
    case K::Sum: {
      Json terms = Json::array();
      for (const auto& c : n.children) terms.push_back(psi_to_json(c));
      return {{"kind", "sum"}, {"terms", terms}};
    }
    case K::Compose:
      return {{"kind", "compose"}, {"outer", psi_to_json(n.children[0])}, {"inner", psi_to_json(n.children[1])}};
    case K::Levy: {
      Json atoms = Json::array(), segs = Json::array();
      for (const auto& a : n.mu.atoms()) atoms.push_back({a.location, a.mass});
      for (const auto& s : n.mu.segments()) {
        if (!s.term) throw UnsupportedError("only term segments can be serialized");
        segs.push_back({{"lower", s.lower},
                        {"upper", finite_or_null(s.upper)},
                        {"coef", s.term->coef},
                        {"power", s.term->power},
                        {"decay", s.term->decay}});
      }
      return {{"kind", "levy"}, {"a", n.a}, {"b", n.b}, {"atoms", atoms}, {"segments", segs}};
    }
  }
  throw UnsupportedError("unknown psi kind");
}

Complex parse_complex(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw SpecError("complex numbers are [re, im] pairs");
}

Json complex_to_json(Complex z) { return Json::array({finite_or_null(z.real()), finite_or_null(z.imag())}); }

Matrix parse_matrix(const Json& j) {
  if (!j.is_array() || j.empty()) throw SpecError("matrix: expected a non-empty array of rows");
  const std::size_t n = j.size();
  if (n > std::size_t(max_dimension)) throw SpecError("matrix: dimension exceeds " + std::to_string(max_dimension));
  Matrix m(static_cast<Index>(n), static_cast<Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (!j[i].is_array() || j[i].size() != n) throw SpecError("matrix: must be square");
    for (std::size_t k = 0; k < n; ++k) m(Index(i), Index(k)) = parse_complex(j[i][k]);
  }
  if (!m.allFinite()) throw SpecError("matrix: entries must be finite");
  return m;
}

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index k = 0; k < m.cols(); ++k) row.push_back(complex_to_json(m(i, k)));
    rows.push_back(row);
  }
  return rows;
}

SubordinatorFamily parse_family(const Json& j) {
  if (!j.is_object() || !j.contains("family") || !j.at("family").is_string())
    throw SpecError("family: missing \"family\"");
  const std::string f = j.at("family").get<std::string>();
  if (f == "gamma") {
    require_keys(j, {"family"}, f);
    return SubordinatorFamily::gamma();
  }
  if (f == "stable_half") {
    require_keys(j, {"family"}, f);
    return SubordinatorFamily::stable_half();
  }
  if (f == "identity") {
    require_keys(j, {"family"}, f);
    return SubordinatorFamily::identity();
  }
  if (f == "poisson") {
    require_keys(j, {"family", "c"}, f);
    return SubordinatorFamily::poisson(number(j, "c", f, 1.0));
  }
  if (f == "composed") {
    require_keys(j, {"family", "outer", "inner"}, f);
    if (!j.contains("outer") || !j.contains("inner")) throw SpecError("composed: needs \"outer\" and \"inner\"");
    return SubordinatorFamily::composed(parse_family(j.at("outer")), parse_family(j.at("inner")));
  }
  throw SpecError("family: unknown family \"" + f + "\"");
}

Json family_to_json(const SubordinatorFamily& f) {
  using K = SubordinatorFamily::Kind;
  switch (f.kind()) {
    case K::Gamma: return {{"family", "gamma"}};
    case K::StableHalf: return {{"family", "stable_half"}};
    case K::Identity: return {{"family", "identity"}};
    case K::Poisson: return {{"family", "poisson"}, {"c", f.c()}};
    case K::Composed:
      return {{"family", "composed"}, {"outer", family_to_json(f.outer())}, {"inner", family_to_json(f.inner())}};
  }
  return {};
}

Json report_to_json(const CheckReport& r) {
  Json j;
  j["id"] = r.id;
  j["samples"] = r.samples;
  j["worst_margin"] = finite_or_null(r.worst_margin);
  j["worst_point"] = {{"lambda", complex_to_json(r.worst_lambda)}, {"z", complex_to_json(r.worst_z)}};
  j["pass"] = r.pass;
  j["tolerance"] = r.tolerance;
  Json c = Json::object();
  for (const auto& [k, v] : r.constants) c[k] = finite_or_null(v);
  j["constants"] = c;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

}  // namespace bfcalc

#include "bfcalc/measure.hpp"

#include "bfcalc/kernels.hpp"

#include <algorithm>
#include <sstream>

namespace bfcalc {

RadonMeasure::RadonMeasure(std::vector<Atom> atoms, std::vector<DensitySegment> segments)
    : atoms_(std::move(atoms)), segments_(std::move(segments)) {
  validate();
}

RadonMeasure RadonMeasure::dirac(double location, double mass) {
  return RadonMeasure({Atom{location, mass}}, {});
}

RadonMeasure RadonMeasure::from_term(double lower, double upper, DensityTerm term, int order) {
  DensitySegment seg;
  seg.lower = lower;
  seg.upper = upper;
  seg.term = term;
  seg.endpoint_exponent = lower == 0.0 ? term.power : 0.0;
  seg.order = order;
  return RadonMeasure({}, {seg});
}

bool RadonMeasure::compactly_supported() const {
  return std::all_of(segments_.begin(), segments_.end(),
                     [](const DensitySegment& s) { return std::isfinite(s.upper); });
}

void RadonMeasure::validate(bool require_disjoint) const {
  for (const auto& a : atoms_) {
    if (!(a.location > 0.0) || !std::isfinite(a.location))
      throw SpecError("atom locations must be positive and finite");
    if (!(a.mass > 0.0) || !std::isfinite(a.mass)) throw SpecError("atom masses must be positive and finite");
  }
  for (const auto& s : segments_) {
    if (!(s.lower >= 0.0) || !(s.upper > s.lower)) throw SpecError("segment interval must satisfy 0 <= l < u");
    if (!s.density && !s.term) throw SpecError("segment needs a density");
    if (s.term && !(s.term->coef > 0.0)) throw SpecError("density coefficient must be positive");
    if (s.term && !(s.term->decay >= 0.0)) throw SpecError("density decay rate must be nonnegative");
    if (s.order < 1) throw SpecError("quadrature order must be positive");
    if (!std::isfinite(s.upper) && !s.term && !s.tail) throw SpecError("unbounded segment needs a tail descriptor");
  }
  if (require_disjoint) {
    std::vector<std::pair<double, double>> iv;
    for (const auto& s : segments_) iv.emplace_back(s.lower, s.upper);
    std::sort(iv.begin(), iv.end());
    for (std::size_t i = 1; i < iv.size(); ++i)
      if (iv[i].first < iv[i - 1].second) throw SpecError("segment intervals overlap");
  }
}

RadonMeasure RadonMeasure::scaled(double c) const {
  if (!(c > 0.0)) throw DomainError("measure scale factor must be positive");
  RadonMeasure out = *this;
  for (auto& a : out.atoms_) a.mass *= c;
  for (auto& s : out.segments_) {
    if (s.density) {
      auto f = s.density;
      s.density = [f, c](double x) { return c * f(x); };
    }
    if (s.term) s.term->coef *= c;
    if (s.tail) s.tail->envelope.coef *= c;
  }
  return out;
}

RadonMeasure RadonMeasure::operator+(const RadonMeasure& other) const {
  RadonMeasure out = *this;
  out.atoms_.insert(out.atoms_.end(), other.atoms_.begin(), other.atoms_.end());
  out.segments_.insert(out.segments_.end(), other.segments_.begin(), other.segments_.end());
  return out;
}

RadonMeasure RadonMeasure::restricted(double lo, double hi) const {
  RadonMeasure out;
  for (const auto& a : atoms_)
    if (a.location >= lo && a.location < hi) out.atoms_.push_back(a);
  for (const auto& s : segments_) {
    const double l = std::max(lo, s.lower), u = std::min(hi, s.upper);
    if (!(u > l)) continue;
    DensitySegment t = s;
    t.lower = l;
    t.upper = u;
    if (l > 0.0) t.endpoint_exponent = 0.0;
    if (!std::isfinite(u) && t.tail) t.tail->start = std::max(t.tail->start, l);
    if (std::isfinite(u)) t.tail.reset();
    out.segments_.push_back(std::move(t));
  }
  return out;
}

RadonMeasure RadonMeasure::reciprocal() const {
  RadonMeasure out;
  for (const auto& a : atoms_) out.atoms_.push_back({1.0 / a.location, a.mass});
  std::reverse(out.atoms_.begin(), out.atoms_.end());
  for (const auto& s : segments_) {
    DensitySegment t;
    t.lower = std::isfinite(s.upper) ? 1.0 / s.upper : 0.0;
    t.upper = s.lower > 0.0 ? 1.0 / s.lower : inf;
    t.order = s.order;
    DensitySegment src = s;
    t.density = [src](double x) { return src(1.0 / x) / (x * x); };
    if (t.lower == 0.0) {
      // behaviour at t -> 0 mirrors the tail of the source
      bool power_tail = (s.term && s.term->decay == 0.0) ||
                        (!s.term && s.tail && s.tail->exact && s.tail->envelope.decay == 0.0);
      if (power_tail) {
        const double q = s.term ? s.term->power : s.tail->envelope.power;
        t.endpoint_exponent = -q - 2.0;
      }
    }
    if (!std::isfinite(t.upper)) {
      // source near 0: density ~ reg(s) s^q0, so image ~ reg(1/t) t^{-q0-2}
      const double q0 = s.endpoint_exponent;
      double c = 0.0;
      if (s.term) {
        c = s.term->coef;
      } else {
        for (int i = 0; i <= 32; ++i) {
          const double x = std::pow(10.0, -12.0 + 12.0 * i / 32.0) * std::min(1.0, s.upper);
          c = std::max(c, s.regular_part(x));
        }
        c *= 1.5;
      }
      const bool exact = s.term && s.term->decay == 0.0;
      t.tail = TailDescriptor{1.0, DensityTerm{c, -q0 - 2.0, 0.0}, exact};
      if (exact) t.term = DensityTerm{s.term->coef, -s.term->power - 2.0, 0.0};
    }
    if (t.term) t.density = nullptr;
    out.segments_.push_back(std::move(t));
  }
  out.validate();
  return out;
}

namespace {

QuadTol moment_tol() {
  QuadTol t;
  t.abs = 1e-13;
  t.rel = 1e-11;
  return t;
}

}  // namespace

double levy_admissibility(const RadonMeasure& mu) {
  RealKernel k{[](double s) { return s / (1.0 + s); }, [](double s) { return 1.0 / (1.0 + s); }, 1, 1.0, 1.0};
  const double v = integrate_measure(k, mu, moment_tol());
  if (!std::isfinite(v)) throw AdmissibilityError("int s/(1+s) mu(ds) is not finite");
  return v;
}

namespace {

struct ResolventMassKernel {
  using value_type = double;
  double zero() const { return 0.0; }
  double operator()(double s) const { return 1.0 / (1.0 + s); }
  double reduced(double s) const { return 1.0 / (1.0 + s); }
  int order_at_zero() const { return 0; }
  double scale() const { return 1.0; }
  double bound(double s) const { return 1.0 / s; }
  double tail_decay() const { return 1.0; }
  double power_tail_start() const { return 4.0; }
  double power_tail(double L, double C, double q) const {
    return C * rational_power_tail(1.0, L, q, 0, 1).real();
  }
};

}  // namespace

double stieltjes_admissibility(const RadonMeasure& sigma) {
  const double v = integrate_measure(ResolventMassKernel{}, sigma, moment_tol());
  if (!std::isfinite(v)) throw AdmissibilityError("int sigma(ds)/(1+s) is not finite");
  return v;
}

double total_mass(const RadonMeasure& m) {
  RealKernel k{[](double) { return 1.0; }, nullptr, 0, 1.0, 1.0};
  return integrate_measure(k, m, moment_tol());
}

double first_moment(const RadonMeasure& m) {
  RealKernel k{[](double s) { return s; }, [](double) { return 1.0; }, 1, 1.0, inf};
  return integrate_measure(k, m, moment_tol());
}

}  // namespace bfcalc

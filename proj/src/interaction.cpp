// Copyright 2026 The iontrap Authors
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

#include "iontrap/interaction.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "iontrap/constants.hpp"
#include "iontrap/errors.hpp"
#include "iontrap/io.hpp"

namespace iontrap::interaction {

using constants::kPi;
using constants::kTwoPi;

namespace {

constexpr cplx kI(0.0, 1.0);

cplx i_pow(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

int upper_level(Transition t) { return t == Transition::kGE ? 1 : 2; }

}  // namespace

const char* to_string(Transition t) { return t == Transition::kGE ? "ge" : "gr"; }

const char* to_string(Regime r) {
  switch (r) {
    case Regime::kIdealLD: return "ld";
    case Regime::kExactLaguerre: return "exact";
    case Regime::kFullOffResonant: return "full";
  }
  return "?";
}

Regime parse_regime(const std::string& s) {
  if (s == "ld") return Regime::kIdealLD;
  if (s == "exact") return Regime::kExactLaguerre;
  if (s == "full") return Regime::kFullOffResonant;
  throw std::invalid_argument("unknown regime '" + s + "' (ld|exact|full)");
}

void CouplingContext::validate() const {
  if (!(nu > 0.0)) throw std::invalid_argument("bus mode frequency must be positive");
  if (lambda.size() != eta.size()) throw std::invalid_argument("context size mismatch");
  if (geometry == chain::Geometry::kStanding && chi.size() != eta.size())
    throw std::invalid_argument("standing wave needs one chi per ion");
}

CouplingContext uniform_context(int n_ions, double lambda, double eta, double nu,
                                double lambda_gr) {
  if (lambda_gr < 0.0) lambda_gr = lambda;
  CouplingContext c;
  c.lambda.assign(n_ions, {cplx(lambda, 0.0), cplx(lambda_gr, 0.0)});
  c.eta.assign(n_ions, eta);
  c.nu = nu;
  c.position_phase.assign(n_ions, 0.0);
  c.validate();
  return c;
}

CouplingContext make_context(const chain::IonChain& chain,
                             const chain::ModeSpectrum& spectrum,
                             const chain::LaserConfig& laser, int alpha,
                             double lambda_gr) {
  if (lambda_gr < 0.0) lambda_gr = laser.coupling;
  CouplingContext c;
  c.eta = chain::lamb_dicke_parameters(spectrum, laser, alpha);
  c.nu = spectrum.frequencies.at(alpha - 1);
  const double kappa = laser.kappa();
  for (int j = 0; j < chain.n_ions; ++j) {
    const double pos = kappa * chain.positions_m[j];
    c.position_phase.push_back(pos);
    const cplx ph = std::exp(-kI * (laser.phase - pos));
    c.lambda.push_back({laser.coupling * ph, lambda_gr * ph});
  }
  c.geometry = laser.geometry;
  c.chi = laser.chi;
  c.kind = laser.kind;
  c.validate();
  return c;
}

double laguerre(int n, int a, double x) {
  if (n < 0) throw std::invalid_argument("Laguerre degree must be >= 0");
  double prev = 1.0;
  if (n == 0) return prev;
  double cur = 1.0 + a - x;
  for (int m = 1; m < n; ++m) {
    const double next = ((2.0 * m + 1.0 + a - x) * cur - (m + a) * prev) / (m + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

double sqrt_factorial_ratio(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r /= std::sqrt(static_cast<double>(n + i));
  return r;
}

cplx displacement_element(double eta, int m, int n) {
  const int lo = std::min(m, n);
  const int d = std::abs(m - n);
  const double mag = std::exp(-eta * eta / 2.0) * std::pow(eta, d) *
                     sqrt_factorial_ratio(lo, d) * laguerre(lo, d, eta * eta);
  return i_pow(d) * mag;
}

cplx rabi_frequency(cplx lambda, double eta, int n, int k) {
  if (n < 0) throw std::invalid_argument("phonon number must be >= 0");
  return lambda * displacement_element(eta, n + std::abs(k), n);
}

cplx rabi_frequency_ld(cplx lambda, double eta, int n, int k) {
  if (n < 0) throw std::invalid_argument("phonon number must be >= 0");
  const int a = std::abs(k);
  return lambda * i_pow(a) * std::pow(eta, a) / (sqrt_factorial_ratio(n, a) * factorial(a));
}

cplx rabi_frequency(const CouplingContext& ctx, int ion, Transition t, int n, int k,
                    bool lamb_dicke) {
  const cplx lam = ctx.coupling(ion, t);
  const double eta = ctx.eta.at(ion);
  return lamb_dicke ? rabi_frequency_ld(lam, eta, n, k) : rabi_frequency(lam, eta, n, k);
}

namespace {

double standing_factor(double chi, int k, chain::TransitionKind kind) {
  const double arg = chi + kPi * std::abs(k) / 2.0;
  return kind == chain::TransitionKind::kDipole ? std::sin(arg) : std::cos(arg);
}

cplx standing_rate(cplx lambda, double eta, int n, int k, double chi,
                   chain::TransitionKind kind, bool lamb_dicke) {
  const int a = std::abs(k);
  const double f = standing_factor(chi, k, kind);
  if (lamb_dicke)
    return 2.0 * lambda * f * std::pow(eta, a) / (sqrt_factorial_ratio(n, a) * factorial(a));
  return 2.0 * lambda * std::exp(-eta * eta / 2.0) * f * std::pow(eta, a) *
         sqrt_factorial_ratio(n, a) * laguerre(n, a, eta * eta);
}

}  // namespace

cplx standing_wave_rabi(cplx lambda, double eta, int n, int k, double chi,
                        chain::TransitionKind kind) {
  if (n < 0) throw std::invalid_argument("phonon number must be >= 0");
  return standing_rate(lambda, eta, n, k, chi, kind, false);
}

cplx standing_wave_rabi(const CouplingContext& ctx, int ion, Transition t, int n, int k) {
  if (ctx.geometry != chain::Geometry::kStanding)
    throw std::invalid_argument("standing_wave_rabi needs a standing-wave context");
  return standing_wave_rabi(ctx.coupling(ion, t), ctx.eta.at(ion), n, k, ctx.chi.at(ion),
                            ctx.kind);
}

cplx block_rate(const Pulse& p, const CouplingContext& ctx, int n) {
  if (p.ion < 0 || p.ion >= ctx.n_ions()) throw std::out_of_range("pulse ion out of range");
  const cplx lam = ctx.coupling(p.ion, p.transition) * std::exp(-kI * p.phase);
  const double eta = ctx.eta[p.ion];
  const bool ld = p.regime == Regime::kIdealLD;
  if (ctx.geometry == chain::Geometry::kStanding)
    return standing_rate(lam, eta, n, p.k, ctx.chi.at(p.ion), ctx.kind, ld);
  return ld ? rabi_frequency_ld(lam, eta, n, p.k) : rabi_frequency(lam, eta, n, p.k);
}

double pulse_duration(const Pulse& p, const CouplingContext& ctx) {
  if (p.area < 0.0) throw std::invalid_argument("pulse area must be >= 0");
  if (p.area == 0.0) return 0.0;
  const double r = std::abs(block_rate(p, ctx, 0));
  if (!(r > 0.0))
    throw PhysicsError("pulse on ion " + std::to_string(p.ion + 1) + " sideband " +
                       std::to_string(p.k) + " has zero coupling at n=0");
  return p.area * kPi / r;
}

PulseValidity validity(const Pulse& p, const CouplingContext& ctx, int n_ref) {
  PulseValidity v;
  const double eta = ctx.eta.at(p.ion);
  v.lamb_dicke_measure = eta * eta * (n_ref + 1);
  v.lamb_dicke = v.lamb_dicke_measure <= 0.1;
  v.drive_ratio = std::abs(ctx.coupling(p.ion, p.transition)) / ctx.nu;
  v.weak_drive = v.drive_ratio <= 0.1;
  return v;
}

double PulseOperator::apply(QuantumState& state) const {
  const std::size_t stride = state.ion_stride(ion);
  const std::size_t inner = stride / static_cast<std::size_t>(fock_dim);
  const std::size_t outer = state.dimension() / (3 * stride);
  double frozen_pop = 0.0;
  auto at = [&](std::size_t base, int local) -> cplx& {
    return state[base + static_cast<std::size_t>(local / fock_dim) * stride +
                 static_cast<std::size_t>(local % fock_dim)];
  };
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t i = 0; i < inner; ++i) {
      const std::size_t base = o * 3 * stride + i * fock_dim;
      for (int f : frozen) frozen_pop += std::norm(at(base, f));
      for (const auto& b : blocks) {
        cplx& lo = at(base, b.lower);
        cplx& up = at(base, b.upper);
        const cplx l = lo, u = up;
        lo = b.ll * l + b.lu * u;
        up = b.ul * l + b.uu * u;
      }
    }
  }
  return frozen_pop;
}

Eigen::MatrixXcd PulseOperator::matrix() const {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(3 * fock_dim, 3 * fock_dim);
  for (const auto& b : blocks) {
    m(b.lower, b.lower) = b.ll;
    m(b.lower, b.upper) = b.lu;
    m(b.upper, b.lower) = b.ul;
    m(b.upper, b.upper) = b.uu;
  }
  return m;
}

PulseOperator pulse_unitary(const Pulse& p, const CouplingContext& ctx, int n_max) {
  if (p.regime == Regime::kFullOffResonant)
    throw std::invalid_argument("pulse_unitary covers the ld and exact regimes only");
  if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
  ctx.validate();
  const double t = pulse_duration(p, ctx);
  PulseOperator op;
  op.ion = p.ion;
  op.fock_dim = n_max + 1;
  const int f = op.fock_dim;
  const int u = upper_level(p.transition);
  const int a = std::abs(p.k);
  for (int n = 0; n <= n_max; ++n) {
    const bool blue = p.k >= 0;
    const int lower = blue ? n : u * f + n;  // state carrying Fock index n
    if (n + a > n_max) {
      op.frozen.push_back(lower);
      continue;
    }
    PulseOperator::Block b;
    b.lower = blue ? n : n + a;
    b.upper = blue ? u * f + n + a : u * f + n;
    const cplx omega = block_rate(p, ctx, n);
    const double mag = std::abs(omega);
    const double c = std::cos(mag * t / 2.0);
    const double s = std::sin(mag * t / 2.0);
    const cplx ph = mag > 0.0 ? omega / mag : cplx(1.0, 0.0);
    b.ll = c;
    b.uu = c;
    b.ul = -kI * s * ph;
    b.lu = -kI * s * std::conj(ph);
    op.blocks.push_back(b);
  }
  return op;
}

namespace {

// Symmetric truncated matrix of exp(i eta (a + a^dag)).
Eigen::MatrixXcd displacement_matrix(double eta, int f) {
  Eigen::MatrixXcd d(f, f);
  for (int m = 0; m < f; ++m)
    for (int n = 0; n <= m; ++n) d(m, n) = d(n, m) = displacement_element(eta, m, n);
  return d;
}

}  // namespace

QuantumState evolve_full(const QuantumState& state, const Pulse& p,
                         const CouplingContext& ctx, double duration,
                         const StepControl& control) {
  ctx.validate();
  if (p.ion < 0 || p.ion >= state.n_ions() || p.ion >= ctx.n_ions())
    throw std::out_of_range("pulse ion out of range");
  if (duration < 0.0) throw std::invalid_argument("duration must be >= 0");
  const cplx lam = ctx.coupling(p.ion, p.transition) * std::exp(-kI * p.phase);
  const double nu = ctx.nu;
  const double delta = p.k * nu;
  const double fastest = std::max({nu, std::abs(delta), std::abs(lam)});
  const double max_step = kTwoPi / (50.0 * fastest);
  double step = control.step > 0.0 ? control.step : kTwoPi / (200.0 * fastest);
  if (step > max_step * (1.0 + 1e-12))
    throw std::invalid_argument("integration step exceeds 2 pi / (50 max(nu, |delta|, |lambda|))");

  QuantumState psi = state;
  if (duration == 0.0) return psi;

  const int f = state.fock_dim();
  const int u = upper_level(p.transition);
  const Eigen::MatrixXcd d0 = displacement_matrix(ctx.eta.at(p.ion), f);
  const Eigen::MatrixXcd d0c = d0.conjugate();
  const std::size_t stride = state.ion_stride(p.ion);
  const std::size_t inner = stride / static_cast<std::size_t>(f);
  const std::size_t outer = state.dimension() / (3 * stride);

  Eigen::VectorXcd phase(f), g(f), up(f);
  auto deriv = [&](double t, const std::vector<cplx>& in, std::vector<cplx>& out) {
    std::fill(out.begin(), out.end(), cplx(0.0, 0.0));
    for (int m = 0; m < f; ++m) phase[m] = std::exp(kI * (nu * t * m));
    const cplx cu = -kI * 0.5 * lam * std::exp(-kI * delta * t);
    const cplx cg = -kI * 0.5 * std::conj(lam) * std::exp(kI * delta * t);
    for (std::size_t o = 0; o < outer; ++o) {
      for (std::size_t i = 0; i < inner; ++i) {
        const std::size_t bg = o * 3 * stride + i * f;
        const std::size_t bu = bg + u * stride;
        for (int m = 0; m < f; ++m) {
          g[m] = std::conj(phase[m]) * in[bg + m];
          up[m] = std::conj(phase[m]) * in[bu + m];
        }
        Eigen::VectorXcd hu = d0 * g;
        Eigen::VectorXcd hg = d0c * up;
        for (int m = 0; m < f; ++m) {
          out[bu + m] += cu * phase[m] * hu[m];
          out[bg + m] += cg * phase[m] * hg[m];
        }
      }
    }
  };

  const auto n_steps = static_cast<long long>(std::ceil(duration / step - 1e-9));
  const double h = duration / static_cast<double>(n_steps);
  const std::size_t dim = psi.dimension();
  std::vector<cplx> k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
  auto& y = psi.data();
  for (long long s = 0; s < n_steps; ++s) {
    const double t = static_cast<double>(s) * h;
    deriv(t, y, k1);
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    deriv(t + 0.5 * h, tmp, k2);
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    deriv(t + 0.5 * h, tmp, k3);
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + h * k3[i];
    deriv(t + h, tmp, k4);
    for (std::size_t i = 0; i < dim; ++i)
      y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    if (control.observer) control.observer(t + h, psi);
  }
  return psi;
}

QuantumState perturbative_evolve(const QuantumState& state, const Pulse& p,
                                 const CouplingContext& ctx, double t) {
  ctx.validate();
  if (t < 0.0) throw std::invalid_argument("t must be >= 0");
  if (p.ion < 0 || p.ion >= state.n_ions()) throw std::out_of_range("pulse ion out of range");
  const cplx lam = ctx.coupling(p.ion, p.transition) * std::exp(-kI * p.phase);
  const double eta = ctx.eta.at(p.ion);
  const double nu = ctx.nu;
  const double delta = p.k * nu;
  auto integral = [t](double w) -> cplx {
    if (w == 0.0) return t;
    return (std::exp(kI * (w * t)) - 1.0) / (kI * w);
  };
  // H = 1/2 sum_j c_j sigma+ O_j exp(i w_j t) + h.c., O in {1, a, a^dag}.
  struct Term {
    cplx c;
    int shift;  // Fock change applied by O
    double w;
  };
  const Term terms[3] = {{lam, 0, -delta},
                         {lam * kI * eta, -1, -nu - delta},
                         {lam * kI * eta, +1, nu - delta}};

  const int f = state.fock_dim();
  const int u = upper_level(p.transition);
  const std::size_t stride = state.ion_stride(p.ion);
  const std::size_t inner = stride / static_cast<std::size_t>(f);
  const std::size_t outer = state.dimension() / (3 * stride);
  QuantumState out = state;
  for (const Term& term : terms) {
    const cplx up_coef = -kI * 0.5 * term.c * integral(term.w);
    const cplx dn_coef = -kI * 0.5 * std::conj(term.c) * integral(-term.w);
    for (std::size_t o = 0; o < outer; ++o) {
      for (std::size_t i = 0; i < inner; ++i) {
        const std::size_t bg = o * 3 * stride + i * f;
        const std::size_t bu = bg + u * stride;
        for (int n = 0; n < f; ++n) {
          const int m = n + term.shift;
          if (m < 0 || m >= f) continue;
          // <m|O|n>
          const double me = term.shift == 0 ? 1.0
                            : term.shift < 0 ? std::sqrt(static_cast<double>(n))
                                             : std::sqrt(static_cast<double>(n + 1));
          out[bu + m] += up_coef * me * state[bg + n];
          // sigma- O^dag maps |u,m> to |g,n> with the same element.
          out[bg + n] += dn_coef * me * state[bu + m];
        }
      }
    }
  }
  return out;
}

void apply_pulse(QuantumState& state, const Pulse& p, const CouplingContext& ctx,
                 std::vector<std::string>* warnings) {
  auto warn = [&](const std::string& w) {
    if (warnings) warnings->push_back(w);
  };
  const double before = state.norm();
  if (p.regime == Regime::kFullOffResonant) {
    state = evolve_full(state, p, ctx, pulse_duration(p, ctx));
  } else {
    PulseOperator op = pulse_unitary(p, ctx, state.n_max());
    const double frozen = op.apply(state);
    if (frozen > 1e-12)
      warn("Fock truncation: population " + io::format_double(frozen) +
           " held fixed on ion " + std::to_string(p.ion + 1));
  }
  const double after = state.norm();
  if (std::abs(after - before) > 1e-10)
    warn("norm changed by " + io::format_double(after - before) + " during a pulse on ion " +
         std::to_string(p.ion + 1));
  const double top = state.top_fock_population();
  if (top > 1e-8)
    warn("population " + io::format_double(top) + " in the top Fock level n_max=" +
         std::to_string(state.n_max()));
}

std::vector<double> thermal_distribution(double mean_n, int n_max) {
  if (mean_n < 0.0) throw std::invalid_argument("mean occupation must be >= 0");
  std::vector<double> p(n_max + 1);
  const double r = mean_n / (1.0 + mean_n);
  double s = 0.0;
  for (int n = 0; n <= n_max; ++n) {
    p[n] = std::pow(r, n) / (1.0 + mean_n);
    s += p[n];
  }
  for (auto& x : p) x /= s;
  return p;
}

Spectrum absorption_spectrum(const std::vector<ModeDistribution>& modes,
                             const std::vector<double>& delta_grid, double linewidth) {
  if (modes.empty()) throw std::invalid_argument("no modes given");
  if (!(linewidth > 0.0)) throw std::invalid_argument("linewidth must be positive");
  constexpr int kExtraQuanta = 40;

  std::vector<SpectralLine> lines = {{0.0, 1.0}};
  for (const auto& mode : modes) {
    double norm = 0.0;
    for (double x : mode.populations) {
      if (x < 0.0) throw std::invalid_argument("negative phonon population");
      norm += x;
    }
    if (std::abs(norm - 1.0) > 1e-9)
      throw std::invalid_argument("phonon distribution is not normalized");
    std::map<int, double> by_shift;
    const int n_top = static_cast<int>(mode.populations.size()) - 1;
    for (int n = 0; n <= n_top; ++n) {
      if (mode.populations[n] == 0.0) continue;
      for (int m = 0; m <= n_top + kExtraQuanta; ++m)
        by_shift[m - n] += mode.populations[n] * std::norm(displacement_element(mode.eta, m, n));
    }
    std::vector<SpectralLine> next;
    for (const auto& l : lines)
      for (const auto& [shift, w] : by_shift)
        next.push_back({l.delta + mode.nu * shift, l.weight * w});
    std::sort(next.begin(), next.end(),
              [](const SpectralLine& a, const SpectralLine& b) { return a.delta < b.delta; });
    lines.clear();
    for (const auto& l : next) {
      if (!lines.empty() &&
          std::abs(lines.back().delta - l.delta) <= 1e-9 * std::max(1.0, std::abs(l.delta)))
        lines.back().weight += l.weight;
      else
        lines.push_back(l);
    }
  }

  Spectrum s;
  s.lines = lines;
  const double hw2 = linewidth * linewidth / 4.0;
  for (double d : delta_grid) {
    double v = 0.0;
    for (const auto& l : lines) v += l.weight * hw2 / ((d - l.delta) * (d - l.delta) + hw2);
    s.intensity.push_back(v);
  }
  return s;
}

std::string format_area(double area) {
  for (int q = 1; q <= 64; ++q) {
    const double p = std::round(area * q);
    if (std::abs(p) > 1e15) break;
    if (p / q == area) {
      std::string s = io::format_double(p);
      if (q != 1) s += "/" + std::to_string(q);
      return s + "pi";
    }
  }
  return io::format_double(area) + "pi";
}

std::string format_pulse(const Pulse& p) {
  std::ostringstream out;
  out << "pulse ion=" << p.ion + 1 << " k=" << p.k << " area=" << format_area(p.area)
      << " phase=" << io::format_double(p.phase) << " transition=" << to_string(p.transition)
      << " regime=" << to_string(p.regime);
  return out.str();
}

std::string format_pulse_program(const std::vector<Pulse>& pulses) {
  std::string s;
  for (const auto& p : pulses) s += format_pulse(p) + "\n";
  return s;
}

namespace {

double parse_area(const std::string& v, int line, int col) {
  if (v.size() < 2 || v.compare(v.size() - 2, 2, "pi") != 0)
    throw ParseError("area must be written as <rational>pi", line, col);
  std::string num = v.substr(0, v.size() - 2);
  if (num.empty()) return 1.0;
  double area;
  if (auto slash = num.find('/'); slash != std::string::npos) {
    auto p = io::parse_int(num.substr(0, slash));
    auto q = io::parse_int(num.substr(slash + 1));
    if (!p || !q || *q <= 0) throw ParseError("malformed rational '" + num + "'", line, col);
    area = static_cast<double>(*p) / static_cast<double>(*q);
  } else {
    auto d = io::parse_double(num);
    if (!d) throw ParseError("malformed number '" + num + "'", line, col);
    area = *d;
  }
  if (area < 0.0) throw ParseError("area must be >= 0", line, col);
  return area;
}

}  // namespace

std::vector<Pulse> parse_pulse_program(const std::string& text) {
  std::vector<Pulse> out;
  const auto lines = io::split_lines(text);
  for (size_t li = 0; li < lines.size(); ++li) {
    const int ln = static_cast<int>(li) + 1;
    auto toks = io::tokenize(lines[li]);
    if (toks.empty()) continue;
    if (toks[0].text != "pulse")
      throw ParseError("expected 'pulse', got '" + toks[0].text + "'", ln, toks[0].column);
    Pulse p;
    std::set<std::string> seen;
    for (size_t ti = 1; ti < toks.size(); ++ti) {
      const auto& tk = toks[ti];
      auto eq = tk.text.find('=');
      if (eq == std::string::npos)
        throw ParseError("expected key=value, got '" + tk.text + "'", ln, tk.column);
      const std::string key = tk.text.substr(0, eq);
      const std::string val = tk.text.substr(eq + 1);
      const int vcol = tk.column + static_cast<int>(eq) + 1;
      if (!seen.insert(key).second) throw ParseError("duplicate key '" + key + "'", ln, tk.column);
      if (key == "ion") {
        auto v = io::parse_int(val);
        if (!v || *v < 1) throw ParseError("ion must be a positive integer", ln, vcol);
        p.ion = static_cast<int>(*v) - 1;
      } else if (key == "k") {
        auto v = io::parse_int(val);
        if (!v || std::abs(*v) > 1000) throw ParseError("k must be an integer", ln, vcol);
        p.k = static_cast<int>(*v);
      } else if (key == "area") {
        p.area = parse_area(val, ln, vcol);
      } else if (key == "phase") {
        auto v = io::parse_double(val);
        if (!v) throw ParseError("malformed phase '" + val + "'", ln, vcol);
        p.phase = *v;
      } else if (key == "transition") {
        if (val == "ge") p.transition = Transition::kGE;
        else if (val == "gr") p.transition = Transition::kGR;
        else throw ParseError("transition must be ge or gr", ln, vcol);
      } else if (key == "regime") {
        try {
          p.regime = parse_regime(val);
        } catch (const std::invalid_argument& e) {
          throw ParseError(e.what(), ln, vcol);
        }
      } else {
        throw ParseError("unknown key '" + key + "'", ln, tk.column);
      }
    }
    for (const char* req : {"ion", "k", "area", "phase", "transition", "regime"})
      if (!seen.count(req))
        throw ParseError(std::string("missing key '") + req + "'", ln, toks[0].column);
    out.push_back(p);
  }
  return out;
}

}  // namespace iontrap::interaction

#include "lsinv/transfer.hpp"

#include <algorithm>
#include <cmath>

#include "lsinv/errors.hpp"

namespace lsinv {

namespace {

const Eigen::Matrix2cd kEta = (Eigen::Matrix2cd() << 1, 0, 0, -1).finished();
const Eigen::Matrix2cd kTau = (Eigen::Matrix2cd() << 0, 1, 1, 0).finished();
const Eigen::Matrix2cd kZeta = (Eigen::Matrix2cd() << 0, 1, -1, 0).finished();

Eigen::Matrix2cd phase_diag(double k, double s) {
  const Complex i_unit(0.0, 1.0);
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  m(0, 0) = std::exp(i_unit * (k * s));
  m(1, 1) = std::exp(-i_unit * (k * s));
  return m;
}

} // namespace

TransferMatrix shift_matrix(double k, double s) {
  return {phase_diag(k, s), k};
}

TransferMatrix delta_transfer(Complex strength, double k) {
  if (k <= 0.0)
    throw ConfigError("delta_transfer: wavenumber must be positive");
  const Complex a = strength / Complex(0.0, k);
  Eigen::Matrix2cd m;
  m << 1.0 + a, a, -a, 1.0 - a;
  return {m, k};
}

TransferMatrix place_at(const TransferMatrix& local, double position) {
  const Eigen::Matrix2cd shift = phase_diag(local.k, position);
  return {shift.conjugate() * local.m * shift, local.k};
}

TransferMatrix compose(const TransferMatrix& later,
                       const TransferMatrix& earlier) {
  return {later.m * earlier.m, later.k};
}

double check_pcc(const TransferMatrix& matrix) {
  return (matrix.m.adjoint() * kEta * matrix.m - kEta).cwiseAbs().maxCoeff();
}

double check_tri(const TransferMatrix& matrix) {
  const Complex det = matrix.m.determinant();
  if (std::abs(det) < 1e-12)
    throw NumericalError("check_tri: singular transfer matrix");
  const Eigen::Matrix2cd inverse = matrix.m.inverse();
  return (inverse * kTau * matrix.m.conjugate() - kTau).cwiseAbs().maxCoeff();
}

std::vector<AmplitudePair> propagate_amplitudes(
    const std::vector<Scatterer>& chain, Complex incoming) {
  for (std::size_t n = 1; n < chain.size(); ++n) {
    if (chain[n].position <= chain[n - 1].position)
      throw ConfigError("propagate_amplitudes: scatterer positions must be "
                        "strictly ascending");
  }

  std::vector<Eigen::Matrix2cd> placed(chain.size());
  Eigen::Matrix2cd total = Eigen::Matrix2cd::Identity();
  for (std::size_t n = 0; n < chain.size(); ++n) {
    placed[n] = place_at(chain[n].local, chain[n].position).m;
    total = placed[n] * total;
  }

  // No left-mover beyond the last scatterer: G_N = M10 F0 + M11 G0 = 0.
  if (std::abs(total(1, 1)) < 1e-14)
    throw NumericalError("propagate_amplitudes: singular total transfer "
                         "matrix (M11 ~ 0)");
  const Complex reflected = -total(1, 0) * incoming / total(1, 1);

  std::vector<AmplitudePair> pairs(chain.size() + 1);
  pairs[0] = {incoming, reflected};
  Eigen::Vector2cd amp = pairs[0].vec();
  for (std::size_t n = 0; n < chain.size(); ++n) {
    amp = placed[n] * amp;
    pairs[n + 1] = {amp(0), amp(1)};
  }
  return pairs;
}

Complex q_translation(const AmplitudePair& pair_n, const TransferMatrix& m_n,
                      double k, double length) {
  const Eigen::Vector2cd psi = pair_n.vec();
  return k * (psi.adjoint() * kEta * phase_diag(k, length) * m_n.m * psi)(0);
}

Complex qc_translation(const AmplitudePair& pair_n, const TransferMatrix& m_n,
                       double k, double length) {
  const Eigen::Vector2cd psi = pair_n.vec();
  return k * (psi.transpose() * kZeta.transpose() * phase_diag(k, length) *
              m_n.m * psi)(0);
}

Complex q_inversion(const AmplitudePair& pair_n, const AmplitudePair& pair_nbar,
                    const TransferMatrix& m_nbar, double k, double alpha) {
  const Eigen::Vector2cd psi_n = pair_n.vec();
  const Eigen::Vector2cd psi_nbar = pair_nbar.vec();
  return k * (psi_n.adjoint() * kZeta * phase_diag(k, 2.0 * alpha) *
              m_nbar.m * psi_nbar)(0);
}

Complex qc_inversion(const AmplitudePair& pair_n,
                     const AmplitudePair& pair_nbar,
                     const TransferMatrix& m_nbar, double k, double alpha) {
  const Eigen::Vector2cd psi_n = pair_n.vec();
  const Eigen::Vector2cd psi_nbar = pair_nbar.vec();
  return -k * (psi_n.transpose() * kEta * phase_diag(k, 2.0 * alpha) *
               m_nbar.m * psi_nbar)(0);
}

DeltaPlateaus delta_defect_analytic(double strength, double k, double length,
                                    Complex incoming) {
  if (k <= 0.0)
    throw ConfigError("delta_defect_analytic: wavenumber must be positive");
  const Complex i_unit(0.0, 1.0);
  const Complex a = strength / (i_unit * k);
  const double abs2_a = std::norm(a);
  const Complex amplitude =
      k * std::norm(incoming) * std::exp(i_unit * (k * length));

  DeltaPlateaus q;
  q.left = amplitude *
           (1.0 - abs2_a / (1.0 + abs2_a) *
                      std::exp(-i_unit * (2.0 * k * length)));
  q.center = amplitude / (1.0 + std::conj(a));
  q.right = amplitude / (1.0 + abs2_a);
  return q;
}

// ---------------------------------------------------------------------------
// Ring chains
// ---------------------------------------------------------------------------

namespace {

void validate_ring(const RingChain& chain) {
  if (chain.supercell <= 0.0)
    throw ConfigError("ring: supercell must be positive");
  if (chain.positions.size() != chain.strengths.size())
    throw ConfigError("ring: positions and strengths must have equal length");
  if (chain.positions.empty())
    throw ConfigError("ring: need at least one scatterer");
  for (std::size_t n = 0; n < chain.positions.size(); ++n) {
    if (chain.positions[n] < -chain.supercell / 2.0 ||
        chain.positions[n] >= chain.supercell / 2.0)
      throw ConfigError("ring: scatterer outside [-R/2, R/2)");
    if (n > 0 && chain.positions[n] <= chain.positions[n - 1])
      throw ConfigError("ring: positions must be strictly ascending");
  }
}

Eigen::Matrix2cd ring_closure(const RingChain& chain, double k) {
  Eigen::Matrix2cd total = Eigen::Matrix2cd::Identity();
  for (std::size_t n = 0; n < chain.positions.size(); ++n) {
    const TransferMatrix placed =
        place_at(delta_transfer(chain.strengths[n], k), chain.positions[n]);
    total = placed.m * total;
  }
  return phase_diag(k, chain.supercell) * total;
}

// tr(K_R M)/2 - 1: zero exactly at quantized wavenumbers. Real for
// Hermitian (real-strength) chains.
double closure_function(const RingChain& chain, double k) {
  const Complex trace = ring_closure(chain, k).trace();
  if (std::abs(trace.imag()) > 1e-9 * (1.0 + std::abs(trace)))
    throw NumericalError("ring: closure trace not real (non-Hermitian "
                         "chain?)");
  return trace.real() / 2.0 - 1.0;
}

double bisect_root(const RingChain& chain, double lo, double hi, double f_lo) {
  for (int iter = 0; iter < 80; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = closure_function(chain, mid);
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double golden_max(const RingChain& chain, double lo, double hi) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - phi * (b - a);
  double d = a + phi * (b - a);
  double fc = closure_function(chain, c);
  double fd = closure_function(chain, d);
  for (int iter = 0; iter < 90; ++iter) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = closure_function(chain, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = closure_function(chain, d);
    }
  }
  return 0.5 * (a + b);
}

} // namespace

std::vector<double> ring_wavenumbers(const RingChain& chain, double k_lo,
                                     double k_hi, int scan_points) {
  validate_ring(chain);
  if (!(k_lo > 0.0) || k_hi <= k_lo)
    throw ConfigError("ring_wavenumbers: need 0 < k_lo < k_hi");
  if (scan_points < 16)
    throw ConfigError("ring_wavenumbers: scan too coarse");

  const double dk = (k_hi - k_lo) / scan_points;
  std::vector<double> f(scan_points + 1);
  for (int i = 0; i <= scan_points; ++i)
    f[i] = closure_function(chain, k_lo + dk * i);

  std::vector<double> roots;
  // Band-edge states: sign changes of tr - 2.
  for (int i = 0; i < scan_points; ++i) {
    if ((f[i] < 0.0) != (f[i + 1] < 0.0))
      roots.push_back(
          bisect_root(chain, k_lo + dk * i, k_lo + dk * (i + 1), f[i]));
  }
  // Interior (degenerate-pair) states: tangencies of tr with 2 from below.
  // A grid point can sit half a cell off the peak, so refine every
  // shallow local maximum and accept on the refined value.
  for (int i = 1; i < scan_points; ++i) {
    if (f[i] >= 0.0 || f[i] < -1e-2)
      continue;
    if (f[i] < f[i - 1] || f[i] < f[i + 1])
      continue;
    const double k_peak =
        golden_max(chain, k_lo + dk * (i - 1), k_lo + dk * (i + 1));
    if (closure_function(chain, k_peak) > -1e-9)
      roots.push_back(k_peak);
  }

  std::sort(roots.begin(), roots.end());
  std::vector<double> unique;
  for (double k : roots) {
    if (unique.empty() || k - unique.back() > dk / 2.0)
      unique.push_back(k);
  }
  return unique;
}

RingState ring_state(const RingChain& chain, double k) {
  validate_ring(chain);
  const Eigen::Matrix2cd closure = ring_closure(chain, k);
  const Eigen::Matrix2cd deficit = closure - Eigen::Matrix2cd::Identity();

  Eigen::Vector2cd v;
  if (deficit.cwiseAbs().maxCoeff() < 1e-8) {
    v << 1.0, 0.0; // fully degenerate closure: any amplitude pair closes
  } else {
    const Eigen::Vector2cd row_a(-deficit(0, 1), deficit(0, 0));
    const Eigen::Vector2cd row_b(deficit(1, 1), -deficit(1, 0));
    v = row_a.norm() >= row_b.norm() ? row_a : row_b;
    const double residual = (deficit * v).norm() / v.norm();
    if (residual > 1e-6)
      throw NumericalError("ring_state: k is not a quantized ring "
                           "wavenumber (closure residual " +
                           std::to_string(residual) + ")");
  }

  const std::size_t n_scatterers = chain.positions.size();
  RingState state;
  state.k = k;
  state.energy = k * k / 2.0;
  state.regions.resize(n_scatterers);
  state.regions[0] = {v(0), v(1)};
  Eigen::Vector2cd amp = v;
  for (std::size_t n = 0; n + 1 < n_scatterers; ++n) {
    const TransferMatrix placed =
        place_at(delta_transfer(chain.strengths[n], k), chain.positions[n]);
    amp = placed.m * amp;
    state.regions[n + 1] = {amp(0), amp(1)};
  }

  // L2 norm over the ring: region n occupies (X_{n-1}, X_n), region 0 the
  // wrap arc (X_{N-1} - R, X_0).
  const Complex i_unit(0.0, 1.0);
  auto segment_norm = [&](const AmplitudePair& pair, double a, double b) {
    const double direct =
        (std::norm(pair.rightward) + std::norm(pair.leftward)) * (b - a);
    const Complex cross =
        pair.rightward * std::conj(pair.leftward) *
        (std::exp(i_unit * (2.0 * k * b)) - std::exp(i_unit * (2.0 * k * a))) /
        (2.0 * i_unit * k);
    return direct + 2.0 * cross.real();
  };

  double norm2 = segment_norm(state.regions[0],
                              chain.positions[n_scatterers - 1] -
                                  chain.supercell,
                              chain.positions[0]);
  for (std::size_t n = 1; n < n_scatterers; ++n)
    norm2 += segment_norm(state.regions[n], chain.positions[n - 1],
                          chain.positions[n]);
  if (norm2 <= 0.0)
    throw NumericalError("ring_state: non-positive norm");

  const double scale = 1.0 / std::sqrt(norm2);
  for (AmplitudePair& pair : state.regions) {
    pair.rightward *= scale;
    pair.leftward *= scale;
  }
  return state;
}

Complex ring_q_translation(const RingChain& chain, const RingState& state,
                           std::size_t region, double length) {
  if (region >= state.regions.size())
    throw ConfigError("ring_q_translation: region out of range");
  const TransferMatrix placed = place_at(
      delta_transfer(chain.strengths[region], state.k), chain.positions[region]);
  return q_translation(state.regions[region], placed, state.k, length);
}

} // namespace lsinv

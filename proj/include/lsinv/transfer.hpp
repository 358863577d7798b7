#ifndef LSINV_TRANSFER_HPP
#define LSINV_TRANSFER_HPP

#include <Eigen/Core>
#include <Eigen/LU>
#include <complex>
#include <vector>

#include "lsinv/domain.hpp"

namespace lsinv {

/// 2x2 transfer matrix propagating plane-wave amplitude pairs (F, G)
/// from left to right across a scatterer, at wavenumber k.
struct TransferMatrix {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Identity();
  double k = 0.0;

  std::complex<double> determinant() const { return m.determinant(); }
};

/// Amplitudes of psi(x) = F e^{ikx} + G e^{-ikx} in one potential-free
/// region.
struct AmplitudePair {
  Complex rightward{0.0, 0.0}; // F
  Complex leftward{0.0, 0.0};  // G

  Eigen::Vector2cd vec() const { return {rightward, leftward}; }
};

/// Diagonal phase-shift matrix K_s = diag(e^{iks}, e^{-iks}).
TransferMatrix shift_matrix(double k, double s);

/// Transfer matrix of a delta scatterer Lambda * delta(x) at the origin,
/// for the jump convention psi'(0+) - psi'(0-) = 2 Lambda psi(0):
/// P = [[1+a, a], [-a, 1-a]] with a = Lambda / (ik). det P = 1 exactly.
TransferMatrix delta_transfer(Complex strength, double k);

/// Scatterer moved from the origin to `position`: K*_s P K_s.
TransferMatrix place_at(const TransferMatrix& local, double position);

TransferMatrix compose(const TransferMatrix& later,
                       const TransferMatrix& earlier);

/// Probability-current-conservation defect ||M^dag eta M - eta||_max,
/// eta = diag(1, -1). Passes when below 1e-10.
double check_pcc(const TransferMatrix& matrix);

/// Time-reversal-invariance defect ||M^-1 tau M* - tau||_max,
/// tau = antidiag(1, 1). Throws NumericalError for singular M.
double check_tri(const TransferMatrix& matrix);

/// One scatterer of a chain: local transfer matrix and its position.
struct Scatterer {
  double position = 0.0;
  TransferMatrix local; // at the origin
};

/// Amplitude pairs in every potential-free region for the scattering
/// boundary condition: `incoming` right-mover from the left, no left-mover
/// beyond the last scatterer. Result has chain.size() + 1 regions; region n
/// lies left of scatterer n.
std::vector<AmplitudePair> propagate_amplitudes(
    const std::vector<Scatterer>& chain, Complex incoming);

/// Interstitial two-point current for translation by L in region n:
/// Q_n = k Psi_n^dag eta K_L M_n Psi_n, with M_n the placed transfer
/// matrix of the scatterer bounding region n on the right.
Complex q_translation(const AmplitudePair& pair_n,
                      const TransferMatrix& m_n, double k, double length);

/// Complementary current, transposed amplitude form:
/// Qc_n = k Psi_n^T zeta^T K_L M_n Psi_n.
Complex qc_translation(const AmplitudePair& pair_n,
                       const TransferMatrix& m_n, double k, double length);

/// Interstitial current for inversion through alpha:
/// Q_n = k Psi_n^dag zeta K_{2 alpha} M_nbar Psi_nbar with
/// zeta = eta tau = [[0, 1], [-1, 0]].
Complex q_inversion(const AmplitudePair& pair_n,
                    const AmplitudePair& pair_nbar,
                    const TransferMatrix& m_nbar, double k, double alpha);

/// Complementary inversion current: Qc_n = -k Psi_n^T eta K_{2 alpha}
/// M_nbar Psi_nbar.
Complex qc_inversion(const AmplitudePair& pair_n,
                     const AmplitudePair& pair_nbar,
                     const TransferMatrix& m_nbar, double k, double alpha);

/// The three plateau values of Q(x) for a single delta defect probed with
/// translation by L under left incidence:
///   Q_L = A (1 - |a|^2/(1+|a|^2) e^{-2ikL}),  Q_C = A / (1 + a*),
///   Q_R = A / (1 + |a|^2),  with A = k |F0|^2 e^{ikL}, a = Lambda/(ik).
struct DeltaPlateaus {
  Complex left;
  Complex center;
  Complex right;
};
DeltaPlateaus delta_defect_analytic(double strength, double k, double length,
                                    Complex incoming);

// ---------------------------------------------------------------------------
// Delta chains on a ring (periodic supercell): the independent oracle for
// the plane-wave pipeline.
// ---------------------------------------------------------------------------

/// Delta scatterers on a ring of circumference R.
struct RingChain {
  double supercell = 0.0;
  std::vector<double> positions; // ascending, inside [-R/2, R/2)
  std::vector<double> strengths;
};

/// Quantized wavenumbers in (k_lo, k_hi): the k at which the ring supports
/// a stationary state, i.e. K_R M_total(k) has eigenvalue 1. Band-edge
/// states appear as sign changes of tr - 2, interior (degenerate) states
/// as tangencies; both are returned, ascending.
std::vector<double> ring_wavenumbers(const RingChain& chain, double k_lo,
                                     double k_hi, int scan_points = 4000);

/// Region amplitudes of the ring state at a quantized k, normalized to
/// unit L2 norm over the ring. Region n lies left of scatterer n; region 0
/// is the wrap arc from the last scatterer around to the first.
struct RingState {
  double k = 0.0;
  double energy = 0.0; // k^2 / 2
  std::vector<AmplitudePair> regions;
};
RingState ring_state(const RingChain& chain, double k);

/// Q_n of a ring-state region under translation by `length`.
Complex ring_q_translation(const RingChain& chain, const RingState& state,
                           std::size_t region, double length);

} // namespace lsinv

#endif

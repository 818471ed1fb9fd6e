#ifndef QVOL_H
#define QVOL_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code of every fallible call. Matches the CLI exit-code classes:
 * 2 argument, 3 numerical domain, 4 I/O; 5 flags a null pointer.
 */
typedef enum {
  QVOL_STATUS_OK = 0,
  QVOL_STATUS_INVALID_ARGUMENT = 2,
  QVOL_STATUS_DOMAIN_ERROR = 3,
  QVOL_STATUS_IO_ERROR = 4,
  QVOL_STATUS_NULL_POINTER = 5,
} QvolStatus;

/**
 * Which metric a call evaluates.
 */
typedef enum {
  QVOL_METRIC_KIND_CLASSICAL = 0,
  QVOL_METRIC_KIND_SLD = 1,
  QVOL_METRIC_KIND_WIGNER_YANASE = 2,
} QvolMetricKind;

/**
 * Integration region selector.
 */
typedef enum {
  QVOL_REGION_TETRAHEDRON = 0,
  QVOL_REGION_OCTAHEDRON = 1,
} QvolRegion;

/**
 * Opaque quadrature-rule handle for the classical metric.
 */
typedef struct QvolQuadrature QvolQuadrature;

/**
 * Opaque precomputed-lattice handle for the classical volume density.
 */
typedef struct QvolSurrogate QvolSurrogate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Detail of the most recent failure on this thread (empty string if none).
 */
const char *qvol_last_error_message(void);

/**
 * Purity `(1 + |t|^2)/4` of the state with the given parameters.
 */
double qvol_purity(double t11, double t22, double t33);

/**
 * The quartic `Delta`; the Helstrom volume density is its inverse square
 * root.
 */
double qvol_delta(double t11, double t22, double t33);

/**
 * Whether the parameters describe a physical state.
 */
bool qvol_in_tetrahedron(double t11, double t22, double t33);

/**
 * Whether the parameters describe a separable state.
 */
bool qvol_in_octahedron(double t11, double t22, double t33);

/**
 * The four Bell-basis eigenvalues, written to `out[0..4]` in the order
 * Psi-, Phi-, Phi+, Psi+.
 */
QvolStatus qvol_bell_spectrum(double t11, double t22, double t33, double *out);

/**
 * Radius `sqrt(4P - 1)` of the sphere of purity `purity`.
 */
QvolStatus qvol_shell_radius(double purity, double *out);

/**
 * Quantum metric tensor at a point. `out_g[0..6]` receives
 * `(g11, g22, g33, g12, g13, g23)`. `kind` must be Sld or WignerYanase.
 */
QvolStatus qvol_metric_quantum(QvolMetricKind kind,
                               double t11,
                               double t22,
                               double t33,
                               double *out_g,
                               double *out_sqrt_det);

/**
 * Builds a quadrature rule; returns null when the sizes are invalid.
 */
QvolQuadrature *qvol_quadrature_new(uint32_t n_theta, uint32_t n_phi);

/**
 * Releases a quadrature handle. Null is accepted and ignored.
 */
void qvol_quadrature_free(QvolQuadrature *quadrature);

/**
 * Classical Fisher-Rao metric by quadrature at an interior point.
 */
QvolStatus qvol_metric_classical(const QvolQuadrature *quadrature,
                                 double t11,
                                 double t22,
                                 double t33,
                                 double margin,
                                 double *out_g,
                                 double *out_sqrt_det);

/**
 * Builds a classical-density lattice and writes it as a `QVGRID1` file.
 */
QvolStatus qvol_surrogate_build(uint32_t resolution,
                                uint32_t n_theta,
                                uint32_t n_phi,
                                double margin,
                                const char *path);

/**
 * Opens a `QVGRID1` file into a surrogate handle.
 */
QvolStatus qvol_surrogate_open(const char *path, QvolSurrogate **out);

/**
 * Releases a surrogate handle. Null is accepted and ignored.
 */
void qvol_surrogate_free(QvolSurrogate *surrogate);

/**
 * Lattice points per axis of an open surrogate.
 */
uint32_t qvol_surrogate_resolution(const QvolSurrogate *surrogate);

/**
 * Trilinear interpolation of the classical volume density.
 */
QvolStatus qvol_surrogate_interpolate(const QvolSurrogate *surrogate,
                                      double t11,
                                      double t22,
                                      double t33,
                                      double *out);

/**
 * Monte Carlo Riemannian volume of a region under a quantum metric.
 */
QvolStatus qvol_volume_quantum(QvolRegion region,
                               QvolMetricKind kind,
                               uint64_t samples,
                               uint64_t seed,
                               double margin,
                               double *out_value,
                               double *out_std_error);

/**
 * Monte Carlo Riemannian volume under the classical metric via a surrogate.
 */
QvolStatus qvol_volume_classical(QvolRegion region,
                                 const QvolSurrogate *surrogate,
                                 uint64_t samples,
                                 uint64_t seed,
                                 double margin,
                                 double *out_value,
                                 double *out_std_error);

/**
 * Volume of the intersection of a region with a fixed-purity shell under a
 * quantum metric.
 */
QvolStatus qvol_shell_volume_quantum(double purity,
                                     QvolRegion region,
                                     QvolMetricKind kind,
                                     uint64_t samples,
                                     uint64_t seed,
                                     double margin,
                                     double *out_value,
                                     double *out_std_error);

/**
 * Shell volume under the classical metric via a surrogate.
 */
QvolStatus qvol_shell_volume_classical(double purity,
                                       QvolRegion region,
                                       const QvolSurrogate *surrogate,
                                       uint64_t samples,
                                       uint64_t seed,
                                       double margin,
                                       double *out_value,
                                       double *out_std_error);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QVOL_H */

"""Walk through a complete maximal-multiplicity placement.

We pick a second order plant with delay tau = 0.5 and ask for the
dominant root at s0 = -5.2. The closed form returns the unique delayed
gains that force a root of multiplicity 2n = 4 at s0, and the rest of
the toolkit certifies that the placement really happened:

  1. synthesize        -> the gains
  2. certify_multiplicity -> the order of vanishing at s0
  3. verify_dominance  -> no spectrum to the right of s0
  4. find_roots        -> the visible part of the root chain
"""

import numpy as np

import midpole as mp

n, tau, s0 = 2, 0.5, -5.2

result = mp.synthesize(n, tau, s0)
qp = result.quasipolynomial()

print("placement: n = %d, tau = %g, target root s0 = %g" % (n, tau, s0))
print("instantaneous coefficients a      =", np.asarray(qp.a))
print("delayed gains          alpha      =", np.asarray(qp.alpha))

# The root of maximal multiplicity is pinned by the coefficients alone:
# s0 = -a_{n-1}/n - n/tau.  Recover it and compare.
recovered = mp.dominant_root_from_coeff(n, tau, qp.a[n - 1])
print("s0 recovered from a_%d            = %.17g" % (n - 1, recovered))

mult = mp.certify_multiplicity(qp, s0)
print("certified multiplicity at s0      = %d (expected %d)" % (mult, 2 * n))

report = mp.verify_dominance(qp, s0, 40.0 * np.pi / tau)
print("roots strictly right of s0        = %d -> dominance %s"
      % (report.count_right, "holds" if report else "fails"))

rect = mp.Rectangle(s0 - 20.0 / tau, s0 + 5.0 / tau, -40.0 / tau, 40.0 / tau)
spectrum = mp.find_roots(qp, rect, deflate=(s0, 2 * n))
print("\nroots in %s:" % (rect,))
for r in sorted(spectrum.roots, key=lambda r: (-r.location.real, abs(r.location.imag))):
    print("  %+.6f %+.6fj  multiplicity %d  residual %.1e"
          % (r.location.real, r.location.imag, r.multiplicity, r.residual))
print("total count %d, strip density bound %s"
      % (spectrum.total_count, spectrum.strip_bound))

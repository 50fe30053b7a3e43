#ifndef ERGOLAT_ERGOLAT_HPP
#define ERGOLAT_ERGOLAT_HPP

// Umbrella header: random +-1 lattice sums of a bump function, the shift
// dynamics acting on them, and the estimators (mean values, quadratic
// seminorms, Bohr coefficients, almost-period scans) used to probe their
// almost-periodic structure.

#include "ergolat/apscan.hpp"
#include "ergolat/bump.hpp"
#include "ergolat/dynamics.hpp"
#include "ergolat/means.hpp"
#include "ergolat/realization.hpp"
#include "ergolat/rng.hpp"
#include "ergolat/seq.hpp"
#include "ergolat/serialize.hpp"
#include "ergolat/stats.hpp"

#endif // ERGOLAT_ERGOLAT_HPP

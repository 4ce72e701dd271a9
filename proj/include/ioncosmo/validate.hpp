#pragma once

#include <string>
#include <vector>

namespace ioncosmo {

// One recomputed invariant: value is the measured deviation, bound the
// allowed deviation after tol_scale. passed == (value <= bound).
struct ValidationCheck {
    std::string name;
    std::string detail;
    double value = 0.0;
    double bound = 0.0;
    bool passed = false;
};

struct ValidationOptions {
    // Multiplies every bound; 0.1 demands ten times tighter agreement.
    double tol_scale = 1.0;
    // Negative control: flips the sign of one Coulomb coupling in the chain
    // curvature matrix before the structural checks run. A healthy suite
    // must report the damage.
    bool tamper_hessian_sign = false;
};

struct ValidationReport {
    bool passed = false;
    double tol_scale = 1.0;
    bool tampered = false;
    std::vector<ValidationCheck> checks;

    // Stable field order, round-trippable numbers.
    std::string to_json() const;
};

// Recomputes cross-module invariants from scratch: chain structure, mode
// normalization, closed-form particle creation anchors, scaling-ansatz and
// energy conservation of the full nonlinear chain, squeezed-state moments,
// readout identities, curvature of a known expansion history, and the
// trap/cosmology route agreement.
ValidationReport run_validation(const ValidationOptions& opt = {});

} // namespace ioncosmo

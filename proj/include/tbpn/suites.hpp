#pragma once

#include "tbpn/checks.hpp"

#include <string>
#include <vector>

namespace tbpn {

/// Energy conservation, Bianchi, Phi/curvature relations, T identities,
/// the nabla/D^V commutator, and the riemannian cross-checks.
std::vector<CheckResult> connectionSuite(Workspace& ws);
/// S, J^c, the Poincare-Cartan forms and every construction of R.
std::vector<CheckResult> liftsSuite(Workspace& ws);
/// Nijenhuis torsions, [R,S], L_Gamma R and the covariant derivatives of U.
std::vector<CheckResult> torsionSuite(Workspace& ws);
/// Special conformal Killing diagnostics and the parallel-J curvature identities.
std::vector<CheckResult> sckSuite(Workspace& ws);
/// Eigenstructure of J, J-bar and R.
std::vector<CheckResult> eigenSuite(Workspace& ws);

const std::vector<std::string>& suiteNames();
/// Runs one suite by name, or every suite for "all".
CheckReport runSuites(Workspace& ws, const std::string& suite);

}  // namespace tbpn

#include "tbpn/suites.hpp"

namespace tbpn {

std::vector<CheckResult> connectionSuite(Workspace& ws) {
    const Connection& c = ws.conn();
    const int n = c.n;
    std::vector<CheckResult> out;

    out.push_back(ws.run("connection/energy", "defgamma", zeroResidual({c.gammaOf(c.E)})));

    {
        std::vector<Expr> cyc;
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y)
                for (int z = 0; z < n; ++z) {
                    Expr acc(0.0);
                    for (int m = 0; m < n; ++m)
                        acc = acc + c.g(z, m) * c.curvature({m, x, y}) + c.g(x, m) * c.curvature({m, y, z}) +
                              c.g(y, m) * c.curvature({m, z, x});
                    cyc.push_back(acc);
                }
        out.push_back(ws.run("connection/bianchi", "Bianchi", zeroResidual(cyc)));
    }

    {
        std::vector<Expr> lhs, rhs;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    lhs.push_back(c.d(c.phi(i, k), Var::u(j)) - c.d(c.phi(i, j), Var::u(k)));
                    rhs.push_back(Expr(3.0) * c.curvature({i, j, k}));
                }
        out.push_back(ws.run("connection/dvPhi", "PhiR", pairResidual(lhs, rhs)));
    }

    {
        std::vector<Expr> lhs, rhs, phiT;
        for (int i = 0; i < n; ++i) {
            Expr t(0.0);
            for (int j = 0; j < n; ++j) {
                Expr acc(0.0);
                for (int k = 0; k < n; ++k) acc = acc + c.curvature({i, k, j}) * Expr::u(k);
                lhs.push_back(c.phi(i, j));
                rhs.push_back(acc);
                t = t + c.phi(i, j) * Expr::u(j);
            }
            phiT.push_back(t);
        }
        if (ws.riemannian()) {
            out.push_back(ws.run("connection/Phi=R(T,.)", "PhiR", pairResidual(lhs, rhs)));
            out.push_back(ws.run("connection/Phi(T)", "PhiR", zeroResidual(phiT)));
        } else {
            const std::string why = "needs a spray quadratic in the velocities";
            out.push_back(Workspace::notApplicable("connection/Phi=R(T,.)", "PhiR", why));
            out.push_back(Workspace::notApplicable("connection/Phi(T)", "PhiR", why));
        }
    }

    const TensorField T = TensorField::vector(Space::Along, c.T());
    out.push_back(ws.run("connection/DVT", "covT", pairResidual(flatten(c.dv(T)), flatten(identityMatrix(n)))));
    if (ws.riemannian()) {
        out.push_back(ws.run("connection/nablaT", "covT", zeroResidual(flatten(c.nabla(T)))));
        out.push_back(ws.run("connection/DHT", "covT", zeroResidual(flatten(c.dh(T)))));
    } else {
        const std::string why = "the deviation vanishes only for quadratic Lagrangians";
        out.push_back(Workspace::notApplicable("connection/nablaT", "covT", why));
        out.push_back(Workspace::notApplicable("connection/DHT", "covT", why));
    }

    {
        // ([nabla, D^V_X] - D^V_{nabla X} + D^H_X) F for X = d/dq^k, F = L and E
        std::vector<Expr> res;
        for (const Expr& F : {c.L, c.E}) {
            const Expr gF = c.gammaOf(F);
            for (int k = 0; k < n; ++k) {
                Expr r = c.gammaOf(c.d(F, Var::u(k))) - c.d(gF, Var::u(k)) + c.horizontal(k, F);
                for (int i = 0; i < n; ++i) r = r - c.nablaCoeff(i, k) * c.d(F, Var::u(i));
                res.push_back(r);
            }
        }
        out.push_back(ws.run("connection/deldv", "deldv", zeroResidual(res)));
    }

    if (!ws.riemannian()) return out;

    {
        std::vector<Expr> lhs, rhs, bl, br;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Expr acc(0.0);
                for (int k = 0; k < n; ++k) {
                    acc = acc + c.christoffel({i, j, k}) * Expr::u(k);
                    bl.push_back(c.berwald({i, j, k}));
                    br.push_back(c.christoffel({i, j, k}));
                }
                lhs.push_back(c.conn(i, j));
                rhs.push_back(acc);
            }
        out.push_back(ws.run("connection/LCconn", "LCconn", pairResidual(lhs, rhs)));
        out.push_back(ws.run("connection/berwald", "LCconn", pairResidual(bl, br)));
    }

    out.push_back(ws.run("connection/metric", "covder",
                         zeroResidual(flatten(c.dh(TensorField::fromMatrix(Space::Along, c.g, 0, 2))))));

    {
        std::vector<Expr> phiL, phiR, curvL, curvR;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Expr p(0.0);
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l) p = p + c.riemann({i, l, j, k}) * Expr::u(k) * Expr::u(l);
                phiL.push_back(c.phi(i, j));
                phiR.push_back(p);
                for (int k = 0; k < n; ++k) {
                    Expr r(0.0);
                    for (int l = 0; l < n; ++l) r = r + c.riemann({i, l, j, k}) * Expr::u(l);
                    curvL.push_back(c.curvature({i, k, j}));
                    curvR.push_back(r);
                }
            }
        out.push_back(ws.run("connection/coordPhi", "coordPhi", pairResidual(phiL, phiR)));
        out.push_back(ws.run("connection/coordR", "coordPhi", pairResidual(curvL, curvR)));
    }

    {
        const ExprMatrix gphi = c.g * c.phi;
        out.push_back(ws.run("connection/Phi-symmetric", "PhiR",
                             pairResidual(flatten(gphi), flatten(ExprMatrix(gphi.transpose())))));
    }
    return out;
}

}  // namespace tbpn

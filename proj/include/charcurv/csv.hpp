#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "charcurv/grid.hpp"
#include "charcurv/solver.hpp"
#include "charcurv/types.hpp"

namespace charcurv {

/// 17-significant-digit decimal, enough for lossless double round-trips.
inline std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

struct VerifyRow {
    std::string check_name;
    long samples = 0;
    double max_error = 0.0;
    bool pass = false;
};

inline void write_verify_csv(const std::vector<VerifyRow>& rows, std::ostream& os) {
    os << "check_name,samples,max_error,pass\n";
    for (const auto& r : rows)
        os << r.check_name << ',' << r.samples << ',' << fmt17(r.max_error) << ',' << (r.pass ? 1 : 0)
           << '\n';
}

inline const char* node_class_name(NodeClass c) {
    switch (c) {
        case NodeClass::interior: return "interior";
        case NodeClass::boundary: return "boundary";
        case NodeClass::exterior: return "exterior";
    }
    return "?";
}

/// Field snapshot over the non-exterior nodes, in lexicographic node order.
inline void write_field_csv(const GridField& g, std::ostream& os) {
    os << "i,j,l,x,y,t,class,u\n";
    for (int i = 0; i < g.dims[0]; ++i)
        for (int j = 0; j < g.dims[1]; ++j)
            for (int l = 0; l < g.dims[2]; ++l) {
                const NodeClass c = g.node_class(i, j, l);
                if (c == NodeClass::exterior) continue;
                const Vector3d p = g.pos(i, j, l);
                os << i << ',' << j << ',' << l << ',' << fmt17(p(0)) << ',' << fmt17(p(1)) << ','
                   << fmt17(p(2)) << ',' << node_class_name(c) << ',' << fmt17(g.u[g.id(i, j, l)]) << '\n';
            }
}

inline void write_report_csv(const SolverReport& rep, std::ostream& os) {
    os << "eps,iters,max_residual,max_grad,converged\n";
    for (const auto& s : rep.stages)
        os << fmt17(s.eps) << ',' << s.iterations << ',' << fmt17(s.max_residual) << ','
           << fmt17(s.max_grad) << ',' << (s.converged ? 1 : 0) << '\n';
}

inline void write_trajectory_csv(const Trajectory& traj, const std::vector<double>& hamiltonian_values,
                                 const std::vector<double>& curvature, std::ostream& os) {
    const int d = traj.states.empty() ? 0 : traj.states.front().dim();
    os << "t";
    for (int i = 0; i < d; ++i) os << ",z" << i;
    os << ",H,curvature\n";
    for (std::size_t s = 0; s < traj.size(); ++s) {
        os << fmt17(traj.times[s]);
        for (int i = 0; i < d; ++i) os << ',' << fmt17(traj.states[s].coords(i));
        os << ',' << fmt17(hamiltonian_values[s]) << ',' << fmt17(curvature[s]) << '\n';
    }
}

}  // namespace charcurv

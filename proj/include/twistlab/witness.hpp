#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "twistlab/core.hpp"
#include "twistlab/dyadic.hpp"
#include "twistlab/maps.hpp"
#include "twistlab/qmap.hpp"

namespace twistlab {

// |y - Phi(x)| + |x|, the quasinorm of the pair (y, x) on the product space
// twisted by Phi.
double twisted_norm(const QMap& phi, const FinVec& y, const FinVec& x);

// H(x + x') - H(x) - H(x') - Phi(Psi(x + x') - Psi(x) - Psi(x')). The pair
// (Phi, Psi) splices trivially iff some homogeneous H keeps this to
// O(|x| + |x'|).
FinVec witness_defect(const QMap& h, const QMap& phi, const QMap& psi, const FinVec& x,
                      const FinVec& xp);

// Sum over all tree nodes of Phi(x_node) - Phi(y_node), accumulated level by
// level with the two families interleaved so that a levelwise-eigenvalue map
// cancels coordinate by coordinate.
FinVec family_difference_sum(const QMap& phi, const AdequatePartition& first,
                             const AdequatePartition& second);

// Euclidean norm of family_difference_sum.
double nutcracker_lhs(const QMap& phi, const AdequatePartition& first,
                      const AdequatePartition& second);

// nutcracker_lhs / (2 h sqrt(2^(h-1))), h the tree height: the analytic
// lower bound every feasible witness constant of the program must satisfy.
double telescoping_bound(const QMap& phi, const AdequatePartition& first,
                         const AdequatePartition& second);

// Commutator constant of the lifting, sampled in the twisted quasinorm of
// its reflected map: sup |L(a f) - a L(f)|_Phi / (sup|a| |f|_p).
ConstantEstimate estimate_C_lift(const FFLift& lift, std::uint64_t trials, std::uint64_t seed);

// Cone-feasibility program over the two lexicographic families: one unknown
// vector per distinct tree vector (shared root and shared leaves are merged
// by exact equality), supported inside the vector it witnesses, and one
// constraint per internal node,
//   | h_parent - h_child0 - h_child1 - Phi(z) |_2 <= K sqrt(2^(h-level-1)).
class WitnessProgram {
public:
    WitnessProgram(int r, int s, std::shared_ptr<const QMap> phi);

    struct Constraint {
        std::size_t parent = 0;
        std::size_t child0 = 0;
        std::size_t child1 = 0;
        int family = 0;
        int level = 0;
        double scale = 1.0;
        double off_support_sq = 0.0;          // squared mass of Phi(z) off supp(z)
        std::vector<double> target;           // Phi(z) on supp(z), in support order
        std::vector<std::uint8_t> which_child;  // per support slot of the parent
        std::vector<std::size_t> child_pos;
    };

    int r() const { return r_; }
    int s() const { return s_; }
    int tree_height() const { return r_ + s_; }
    const QMap& phi() const { return *phi_; }
    std::string map_kind() const;

    const std::vector<std::vector<std::size_t>>& variable_supports() const { return supports_; }
    const std::vector<Constraint>& constraints() const { return constraints_; }
    // constraint indices grouped so that every group touches disjoint
    // variables; groups are processed in order, members in parallel
    const std::vector<std::vector<std::size_t>>& sweep_groups() const { return groups_; }

    const AdequatePartition& first_family() const { return first_; }
    const AdequatePartition& second_family() const { return second_; }

    // residual norm of one constraint at the given point
    double residual(const Constraint& c, const std::vector<std::vector<double>>& h) const;

private:
    int r_;
    int s_;
    std::shared_ptr<const QMap> phi_;
    AdequatePartition first_;
    AdequatePartition second_;
    std::vector<std::vector<std::size_t>> supports_;
    std::vector<Constraint> constraints_;
    std::vector<std::vector<std::size_t>> groups_;
};

struct SolveOptions {
    double tol = 1e-4;
    std::uint64_t max_iters = 100000;  // total projection sweeps across all probes
    std::uint64_t seed = 0;
};

struct SolveReport {
    double K_star = 0.0;
    double lower_bound = 0.0;  // analytic telescoping bound
    std::uint64_t iterations = 0;
    double max_constraint_residual = 0.0;  // worst violation beyond K_star at the point
    std::uint64_t seed = 0;
    std::string status;  // "converged" or "max_iters_exceeded"
    int r = 0;
    int s = 0;
    std::string map_kind;
    double tol = 0.0;
    std::vector<std::vector<double>> point;  // certified feasible point at K_star
};

// Bisection on K with alternating projections onto the cone constraints as
// the feasibility oracle. The reported K_star always carries a certified
// feasible point; non-convergence is flagged in status, never silently
// absorbed.
SolveReport solve_witness_program(const WitnessProgram& program, SolveOptions options = {});

}  // namespace twistlab

#include "twistlab/witness.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "twistlab/detail/sampling.hpp"
#include "twistlab/par.hpp"

namespace twistlab {

double twisted_norm(const QMap& phi, const FinVec& y, const FinVec& x) {
    if (!compatible(y.index_set(), x.index_set())) throw std::domain_error("twisted_norm: index sets differ");
    return pnorm(y - phi(x), phi.codomain_p()) + pnorm(x, phi.domain_p());
}

FinVec witness_defect(const QMap& h, const QMap& phi, const QMap& psi, const FinVec& x,
                      const FinVec& xp) {
    return defect_add(h, x, xp) - phi(defect_add(psi, x, xp));
}

FinVec family_difference_sum(const QMap& phi, const AdequatePartition& first,
                             const AdequatePartition& second) {
    if (first.ground_size() != second.ground_size() ||
        first.tree().height() != second.tree().height())
        throw std::domain_error("family_difference_sum: partitions do not match");
    const IndexSet set = phi.index_set();
    if (set.size() != first.ground_size())
        throw std::domain_error("family_difference_sum: map does not live on the ground set");

    std::vector<double> acc(set.size(), 0.0);
    // Interleave the families level by level: a map with one eigenvalue per
    // level then returns every coordinate to exactly zero within each level.
    for (int level = 0; level <= first.tree().height(); ++level) {
        for (std::size_t pos = 0; pos < first.tree().level_width(level); ++pos) {
            const FinVec v = phi(indicator(first, {level, pos}, set));
            for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += v[i];
        }
        for (std::size_t pos = 0; pos < second.tree().level_width(level); ++pos) {
            const FinVec v = phi(indicator(second, {level, pos}, set));
            for (std::size_t i = 0; i < acc.size(); ++i) acc[i] -= v[i];
        }
    }
    return FinVec(set, std::move(acc));
}

double nutcracker_lhs(const QMap& phi, const AdequatePartition& first,
                      const AdequatePartition& second) {
    return pnorm(family_difference_sum(phi, first, second), PNorm(2.0));
}

double telescoping_bound(const QMap& phi, const AdequatePartition& first,
                         const AdequatePartition& second) {
    const int h = first.tree().height();
    if (h == 0) return 0.0;
    const double denom = 2.0 * h * std::sqrt(std::ldexp(1.0, h - 1));
    return nutcracker_lhs(phi, first, second) / denom;
}

ConstantEstimate estimate_C_lift(const FFLift& lift, std::uint64_t trials, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("estimate_C_lift: trials must be >= 1");
    const QMap& phi = lift.reflected();
    const IndexSet set = phi.index_set();
    auto ratio = [&](std::size_t t) {
        auto [a, f] = detail::sample_c_pair(set, seed, t);
        const double den = sup_norm(a) * pnorm(f, phi.domain_p());
        if (den == 0.0) return -1.0;
        const auto laf = lift(hadamard(a, f));
        const auto lf = lift(f);
        const FinVec dy = laf.first - hadamard(a, lf.first);
        const FinVec dx = laf.second - hadamard(a, lf.second);
        return twisted_norm(phi, dy, dx) / den;
    };
    const par::MaxLoc best = par::max_reduce(trials, ratio);
    auto [wa, wf] = detail::sample_c_pair(set, seed, best.index);
    return ConstantEstimate{std::max(best.value, 0.0), trials, seed, std::move(wa), std::move(wf)};
}

WitnessProgram::WitnessProgram(int r, int s, std::shared_ptr<const QMap> phi)
    : r_(r),
      s_(s),
      phi_(std::move(phi)),
      first_(lex_partitions(r, s).first),
      second_(lex_partitions(r, s).second) {
    if (r < 0 || s < 0) throw std::domain_error("WitnessProgram: exponents must be >= 0");
    if (!phi_) throw std::invalid_argument("WitnessProgram: null map");
    const int h = tree_height();
    const std::size_t ground = std::size_t{1} << h;
    const IndexSet set = phi_->index_set();
    if (set.size() != ground)
        throw std::domain_error("WitnessProgram: map does not live on the 2^(r+s) ground set");

    // One unknown per distinct tree vector; the shared root and the shared
    // leaves collapse onto single variables.
    std::map<std::vector<std::size_t>, std::size_t> ids;
    std::vector<std::vector<std::vector<std::size_t>>> var_of_family(2);
    const AdequatePartition* families[2] = {&first_, &second_};
    for (int fam = 0; fam < 2; ++fam) {
        const AdequatePartition& part = *families[fam];
        var_of_family[fam].resize(static_cast<std::size_t>(h) + 1);
        for (int level = 0; level <= h; ++level) {
            auto& row = var_of_family[fam][static_cast<std::size_t>(level)];
            row.resize(part.tree().level_width(level));
            for (std::size_t pos = 0; pos < row.size(); ++pos) {
                std::vector<std::size_t> block(part.block({level, pos}).begin(),
                                               part.block({level, pos}).end());
                auto [it, inserted] = ids.try_emplace(std::move(block), supports_.size());
                if (inserted) supports_.push_back(it->first);
                row[pos] = it->second;
            }
        }
    }

    for (int fam = 0; fam < 2; ++fam) {
        const AdequatePartition& part = *families[fam];
        for (int level = 0; level < h; ++level) {
            std::vector<std::size_t> group;
            for (std::size_t pos = 0; pos < part.tree().level_width(level); ++pos) {
                Constraint c;
                c.family = fam;
                c.level = level;
                c.parent = var_of_family[fam][static_cast<std::size_t>(level)][pos];
                c.child0 = var_of_family[fam][static_cast<std::size_t>(level) + 1][2 * pos];
                c.child1 = var_of_family[fam][static_cast<std::size_t>(level) + 1][2 * pos + 1];
                c.scale = std::sqrt(std::ldexp(1.0, h - level - 1));

                const auto parent_block = part.block({level, pos});
                const FinVec phi_z = (*phi_)(FinVec::indicator(set, parent_block));
                c.target.resize(parent_block.size());
                for (std::size_t j = 0; j < parent_block.size(); ++j) c.target[j] = phi_z[parent_block[j]];
                double off = 0.0;
                {
                    std::vector<char> on(set.size(), 0);
                    for (std::size_t i : parent_block) on[i] = 1;
                    for (std::size_t i = 0; i < set.size(); ++i)
                        if (!on[i]) off += phi_z[i] * phi_z[i];
                }
                c.off_support_sq = off;

                // walk the parent support; every slot belongs to exactly one child
                const auto& left = supports_[c.child0];
                const auto& right = supports_[c.child1];
                c.which_child.resize(parent_block.size());
                c.child_pos.resize(parent_block.size());
                std::size_t i0 = 0, i1 = 0;
                for (std::size_t j = 0; j < parent_block.size(); ++j) {
                    if (i0 < left.size() && left[i0] == parent_block[j]) {
                        c.which_child[j] = 0;
                        c.child_pos[j] = i0++;
                    } else if (i1 < right.size() && right[i1] == parent_block[j]) {
                        c.which_child[j] = 1;
                        c.child_pos[j] = i1++;
                    } else {
                        throw std::logic_error("WitnessProgram: children do not partition the parent");
                    }
                }
                group.push_back(constraints_.size());
                constraints_.push_back(std::move(c));
            }
            groups_.push_back(std::move(group));
        }
    }
}

std::string WitnessProgram::map_kind() const {
    const auto d = phi_->descriptor();
    return d.contains("kind") ? d["kind"].get<std::string>() : std::string("custom");
}

double WitnessProgram::residual(const Constraint& c, const std::vector<std::vector<double>>& h) const {
    const auto& hp = h[c.parent];
    const auto& h0 = h[c.child0];
    const auto& h1 = h[c.child1];
    double sq = c.off_support_sq;
    for (std::size_t j = 0; j < c.target.size(); ++j) {
        const double child = c.which_child[j] ? h1[c.child_pos[j]] : h0[c.child_pos[j]];
        const double rj = hp[j] - child - c.target[j];
        sq += rj * rj;
    }
    return std::sqrt(sq);
}

namespace {

enum class Verdict { Feasible, Infeasible, Indeterminate };

struct Probe {
    Verdict verdict = Verdict::Indeterminate;
    std::uint64_t sweeps = 0;
};

class ProjectionSolver {
public:
    explicit ProjectionSolver(const WitnessProgram& program, double feas_eps)
        : program_(program), feas_eps_(feas_eps) {}

    double max_violation(double bound, const std::vector<std::vector<double>>& h) const {
        const auto& cs = program_.constraints();
        if (cs.empty()) return 0.0;
        auto f = [&](std::size_t i) {
            const auto& c = cs[i];
            return program_.residual(c, h) - bound * c.scale;
        };
        return par::max_reduce(cs.size(), f).value;
    }

    // one level-synchronous pass of projections onto all cone constraints
    void sweep(double bound, std::vector<std::vector<double>>& h) const {
        const auto& cs = program_.constraints();
        for (const auto& group : program_.sweep_groups()) {
            par::for_each(group.size(), [&](std::size_t g) {
                const auto& c = cs[group[g]];
                project(c, bound * c.scale, h);
            });
        }
    }

    Probe certify(double bound, std::vector<std::vector<double>>& h, std::uint64_t budget) const {
        for (const auto& c : program_.constraints())
            if (c.off_support_sq > bound * c.scale * bound * c.scale)
                return Probe{Verdict::Infeasible, 0};

        double best = max_violation(bound, h);
        if (best <= feas_eps_) return Probe{Verdict::Feasible, 0};
        std::uint64_t stall = 0;
        for (std::uint64_t it = 1; it <= budget; ++it) {
            sweep(bound, h);
            const double viol = max_violation(bound, h);
            if (viol <= feas_eps_) return Probe{Verdict::Feasible, it};
            if (viol < best * (1.0 - kImproveRel)) {
                best = viol;
                stall = 0;
            } else if (++stall >= kStallWindow) {
                return Probe{Verdict::Infeasible, it};
            }
        }
        return Probe{Verdict::Indeterminate, budget};
    }

private:
    // exact Euclidean projection onto |L(h) - target| <= rho for a single
    // constraint; the correction splits evenly between parent and child
    void project(const WitnessProgram::Constraint& c, double rho,
                 std::vector<std::vector<double>>& h) const {
        const double rho_eff_sq = rho * rho - c.off_support_sq;
        if (rho_eff_sq < 0.0) return;  // unreachable cone; probe already rejected
        auto& hp = h[c.parent];
        auto& h0 = h[c.child0];
        auto& h1 = h[c.child1];
        double sq = 0.0;
        for (std::size_t j = 0; j < c.target.size(); ++j) {
            const double child = c.which_child[j] ? h1[c.child_pos[j]] : h0[c.child_pos[j]];
            const double rj = hp[j] - child - c.target[j];
            sq += rj * rj;
        }
        if (sq <= rho_eff_sq) return;
        const double alpha = std::sqrt(rho_eff_sq / sq);  // shrink factor onto the ball
        for (std::size_t j = 0; j < c.target.size(); ++j) {
            double& child = c.which_child[j] ? h1[c.child_pos[j]] : h0[c.child_pos[j]];
            const double rj = hp[j] - child - c.target[j];
            const double move = 0.5 * (alpha - 1.0) * rj;
            hp[j] += move;
            child -= move;
        }
    }

    static constexpr double kImproveRel = 1e-6;
    static constexpr std::uint64_t kStallWindow = 512;

    const WitnessProgram& program_;
    double feas_eps_;
};

// Warm start: diagonal profile h_v = mu_level * v with the per-level
// Rayleigh coefficients of Phi, slacks spread evenly across levels. For a
// map with exact levelwise eigenvalues this point is already optimal.
std::vector<std::vector<double>> diagonal_ansatz(const WitnessProgram& program) {
    const int h = program.tree_height();
    std::vector<std::vector<double>> point;
    point.reserve(program.variable_supports().size());
    for (const auto& supp : program.variable_supports()) point.emplace_back(supp.size(), 0.0);
    if (h == 0) return point;

    std::vector<double> lambda[2];
    std::vector<std::size_t> count[2];
    for (int fam = 0; fam < 2; ++fam) {
        lambda[fam].assign(static_cast<std::size_t>(h), 0.0);
        count[fam].assign(static_cast<std::size_t>(h), 0);
    }
    for (const auto& c : program.constraints()) {
        double mean = 0.0;
        for (double t : c.target) mean += t;
        mean /= static_cast<double>(c.target.size());
        lambda[c.family][static_cast<std::size_t>(c.level)] += mean;
        ++count[c.family][static_cast<std::size_t>(c.level)];
    }
    double delta = 0.0;
    for (int level = 0; level < h; ++level) {
        for (int fam = 0; fam < 2; ++fam)
            lambda[fam][static_cast<std::size_t>(level)] /=
                static_cast<double>(std::max<std::size_t>(count[fam][static_cast<std::size_t>(level)], 1));
        delta += lambda[1][static_cast<std::size_t>(level)] - lambda[0][static_cast<std::size_t>(level)];
    }
    const double eps = delta / (2.0 * h);

    double mu[2][64] = {};
    for (int level = 0; level < h; ++level) {
        mu[0][level + 1] = mu[0][level] - lambda[0][static_cast<std::size_t>(level)] - eps;
        mu[1][level + 1] = mu[1][level] - lambda[1][static_cast<std::size_t>(level)] + eps;
    }

    // Every variable is a block of size 2^(h - level); shared variables take
    // the first family's profile, which agrees at the root and differs only
    // by rounding at the leaves.
    std::vector<int> fam_of(point.size(), -1);
    const AdequatePartition* families[2] = {&program.first_family(), &program.second_family()};
    for (int fam = 0; fam < 2; ++fam) {
        (void)families;
        for (const auto& c : program.constraints()) {
            if (c.family != fam) continue;
            for (std::size_t v : {c.parent, c.child0, c.child1})
                if (fam_of[v] < 0) fam_of[v] = fam;
        }
    }
    for (std::size_t v = 0; v < point.size(); ++v) {
        const std::size_t size = program.variable_supports()[v].size();
        int level = h;
        while ((std::size_t{1} << (h - level)) != size && level > 0) --level;
        const int fam = fam_of[v] < 0 ? 0 : fam_of[v];
        std::fill(point[v].begin(), point[v].end(), mu[fam][level]);
    }
    return point;
}

}  // namespace

SolveReport solve_witness_program(const WitnessProgram& program, SolveOptions options) {
    if (!(options.tol > 0.0)) throw std::invalid_argument("solve_witness_program: tol must be positive");
    SolveReport report;
    report.seed = options.seed;
    report.r = program.r();
    report.s = program.s();
    report.map_kind = program.map_kind();
    report.tol = options.tol;
    report.lower_bound = telescoping_bound(program.phi(), program.first_family(), program.second_family());

    const auto& cs = program.constraints();
    std::vector<std::vector<double>> zero;
    zero.reserve(program.variable_supports().size());
    for (const auto& supp : program.variable_supports()) zero.emplace_back(supp.size(), 0.0);

    double upper = 0.0;
    for (const auto& c : cs) {
        double sq = c.off_support_sq;
        for (double t : c.target) sq += t * t;
        upper = std::max(upper, std::sqrt(sq) / c.scale);
    }
    upper *= 2.0;
    if (upper == 0.0) {
        report.K_star = 0.0;
        report.status = "converged";
        report.point = std::move(zero);
        report.max_constraint_residual = 0.0;
        return report;
    }

    const double feas_eps = std::min(options.tol * 0.05, 1e-6);
    ProjectionSolver solver(program, feas_eps);
    std::uint64_t used = 0;
    auto budget_left = [&] { return options.max_iters > used ? options.max_iters - used : 0; };

    std::vector<std::vector<double>> best_point = diagonal_ansatz(program);
    bool exhausted = false;

    Probe top = solver.certify(upper, best_point, budget_left());
    used += top.sweeps;
    if (top.verdict != Verdict::Feasible) {
        // cannot happen mathematically (h = 0 is strictly feasible at upper)
        // unless the sweep budget ran out
        best_point = std::move(zero);
        if (solver.max_violation(upper, best_point) > feas_eps) {
            report.K_star = upper;
            report.status = "max_iters_exceeded";
            report.iterations = used;
            report.point = std::move(best_point);
            report.max_constraint_residual = 0.0;
            return report;
        }
    }

    double lo = 0.0;
    double hi = upper;
    while (hi - lo > options.tol && !exhausted) {
        if (budget_left() == 0) {
            exhausted = true;
            break;
        }
        const double mid = 0.5 * (lo + hi);
        std::vector<std::vector<double>> trial = best_point;
        const Probe probe = solver.certify(mid, trial, budget_left());
        used += probe.sweeps;
        switch (probe.verdict) {
            case Verdict::Feasible:
                hi = mid;
                best_point = std::move(trial);
                break;
            case Verdict::Infeasible: lo = mid; break;
            case Verdict::Indeterminate: exhausted = true; break;
        }
    }

    report.K_star = hi;
    report.iterations = used;
    report.status = exhausted ? "max_iters_exceeded" : "converged";
    report.max_constraint_residual = std::max(solver.max_violation(hi, best_point), 0.0);
    report.point = std::move(best_point);
    return report;
}

}  // namespace twistlab

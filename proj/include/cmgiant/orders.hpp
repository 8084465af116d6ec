#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cmgiant/distributions.hpp"

namespace cmgiant {

enum class OrderRelation { ST, CX, CV, ICX, ICV, LT };

inline constexpr std::array<OrderRelation, 6> kAllRelations{OrderRelation::ST,  OrderRelation::CX,
                                                            OrderRelation::CV,  OrderRelation::ICX,
                                                            OrderRelation::ICV, OrderRelation::LT};

std::string_view to_string(OrderRelation rel);
/// Accepts st, cx, cv, icx, icv, lt (case-insensitive).
std::optional<OrderRelation> parse_relation(std::string_view name);

/// Point where a defining inequality lhs <= rhs first fails.
struct OrderWitness {
    double point = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
};

struct OrderVerdict {
    OrderRelation relation = OrderRelation::ST;
    bool holds = true;
    std::optional<OrderWitness> witness;
    /// LT answers come from a grid and are semi-decisions.
    bool grid_semi_decision = false;
};

inline constexpr double kOrderTol = 1e-10;
inline constexpr double kMeanRelTol = 1e-12;
inline constexpr std::size_t kLtGridPoints = 1001;

/// Decides p <=_rel q.
///   ST : P(X > t) <= P(Y > t) for every integer t
///   ICX: E(X - k)+ <= E(Y - k)+ for every integer k
///   ICV: E min(X, k) <= E min(Y, k) for every integer k
///   CX : ICX and equal means;  CV(p, q) = CX(q, p)
///   LT : G_p(s) >= G_q(s) on a 1001-point grid of [0, 1]
/// Inequalities are taken with slack kOrderTol; mean equality with relative slack kMeanRelTol.
OrderVerdict check_order(const FinitePmf& p, const FinitePmf& q, OrderRelation rel);

struct ImplicationReport {
    OrderVerdict st, cv, icv, lt;
    /// Each entry names a failed implication, e.g. "st => icv".
    std::vector<std::string> violations;
};

/// Checks st => icv, cv => icv and icv => lt on one pair. A violation means a checker bug.
ImplicationReport implication_chain(const FinitePmf& p, const FinitePmf& q);

/// L1 distance between cdfs, equal to the 1-Wasserstein distance on the line.
double wasserstein_distance(const FinitePmf& p, const FinitePmf& q);

struct ParetoOrderVerdict {
    bool icx = false;
    bool cx = false;
    bool icv = false;
};

/// Closed-form orders between Pareto(alpha1, c1) and Pareto(alpha2, c2), both with alpha > 1:
///   icx iff mean1 <= mean2 and alpha1 >= alpha2
///   cx  iff mean1 == mean2 and alpha1 >= alpha2
///   icv iff mean1 <= mean2 and c1 <= c2
/// Comparisons use relative tolerance 1e-12.
ParetoOrderVerdict pareto_order(double alpha1, double c1, double alpha2, double c2);

}  // namespace cmgiant

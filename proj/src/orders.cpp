#include "cmgiant/orders.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cmgiant {

namespace {

// Dense masses of p and q padded to a common length.
struct AlignedPair {
    std::vector<double> p, q;
};

AlignedPair align(const FinitePmf& p, const FinitePmf& q) {
    AlignedPair out{p.dense(), q.dense()};
    const std::size_t n = std::max(out.p.size(), out.q.size());
    out.p.resize(n, 0.0);
    out.q.resize(n, 0.0);
    return out;
}

double mean_of(const std::vector<double>& w) {
    double m = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) m += static_cast<double>(k) * w[k];
    return m;
}

bool approx_equal_rel(double a, double b, double rel) {
    return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

bool leq_rel(double a, double b, double rel) { return a <= b + rel * std::max(std::abs(a), std::abs(b)); }

OrderVerdict fail(OrderRelation rel, double point, double lhs, double rhs) {
    return OrderVerdict{rel, false, OrderWitness{point, lhs, rhs}, false};
}

// Tail sums P(X > t) for t = 0..n-1.
std::vector<double> tails(const std::vector<double>& w) {
    std::vector<double> out(w.size(), 0.0);
    double acc = 0.0;
    for (std::size_t t = w.size(); t-- > 0;) {
        out[t] = acc;
        acc += w[t];
    }
    return out;
}

OrderVerdict check_st(const AlignedPair& a) {
    const auto tp = tails(a.p);
    const auto tq = tails(a.q);
    for (std::size_t t = 0; t < tp.size(); ++t)
        if (tp[t] > tq[t] + kOrderTol) return fail(OrderRelation::ST, static_cast<double>(t), tp[t], tq[t]);
    return {OrderRelation::ST, true, std::nullopt, false};
}

// E(X - k)+ = sum_{t >= k} P(X > t).
OrderVerdict check_icx(const AlignedPair& a, OrderRelation tag) {
    const auto tp = tails(a.p);
    const auto tq = tails(a.q);
    double sp = 0.0, sq = 0.0;
    std::vector<double> stop_p(tp.size()), stop_q(tq.size());
    for (std::size_t k = tp.size(); k-- > 0;) {
        sp += tp[k];
        sq += tq[k];
        stop_p[k] = sp;
        stop_q[k] = sq;
    }
    for (std::size_t k = 0; k < tp.size(); ++k)
        if (stop_p[k] > stop_q[k] + kOrderTol) return fail(tag, static_cast<double>(k), stop_p[k], stop_q[k]);
    return {tag, true, std::nullopt, false};
}

// E min(X, k) = sum_{t < k} P(X > t); k runs up to the common support end,
// where the transforms reach the means.
OrderVerdict check_icv(const AlignedPair& a) {
    const auto tp = tails(a.p);
    const auto tq = tails(a.q);
    double sp = 0.0, sq = 0.0;
    for (std::size_t k = 1; k <= tp.size(); ++k) {
        sp += tp[k - 1];
        sq += tq[k - 1];
        if (sp > sq + kOrderTol) return fail(OrderRelation::ICV, static_cast<double>(k), sp, sq);
    }
    return {OrderRelation::ICV, true, std::nullopt, false};
}

OrderVerdict check_cx(const AlignedPair& a, OrderRelation tag) {
    const double mp = mean_of(a.p);
    const double mq = mean_of(a.q);
    if (!approx_equal_rel(mp, mq, kMeanRelTol)) {
        // The witness for a mean mismatch is the stop-loss transform at 0.
        return fail(tag, 0.0, mp, mq);
    }
    return check_icx(a, tag);
}

double horner(const std::vector<double>& w, double s) {
    double acc = 0.0;
    for (auto it = w.rbegin(); it != w.rend(); ++it) acc = acc * s + *it;
    return acc;
}

// p <=_Lt q iff G_p >= G_q on [0, 1]; compared as G_q(s) <= G_p(s).
OrderVerdict check_lt(const AlignedPair& a) {
    if (a.q[0] > a.p[0] + kOrderTol) return fail(OrderRelation::LT, 0.0, a.q[0], a.p[0]);
    for (std::size_t i = 1; i < kLtGridPoints; ++i) {
        const double s = static_cast<double>(i) / static_cast<double>(kLtGridPoints - 1);
        const double gp = horner(a.p, s);
        const double gq = horner(a.q, s);
        if (gq > gp + kOrderTol) return fail(OrderRelation::LT, s, gq, gp);
    }
    return {OrderRelation::LT, true, std::nullopt, true};
}

}  // namespace

std::string_view to_string(OrderRelation rel) {
    switch (rel) {
        case OrderRelation::ST: return "st";
        case OrderRelation::CX: return "cx";
        case OrderRelation::CV: return "cv";
        case OrderRelation::ICX: return "icx";
        case OrderRelation::ICV: return "icv";
        case OrderRelation::LT: return "lt";
    }
    return "?";
}

std::optional<OrderRelation> parse_relation(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    for (auto rel : kAllRelations)
        if (to_string(rel) == lower) return rel;
    return std::nullopt;
}

OrderVerdict check_order(const FinitePmf& p, const FinitePmf& q, OrderRelation rel) {
    switch (rel) {
        case OrderRelation::ST: return check_st(align(p, q));
        case OrderRelation::ICX: return check_icx(align(p, q), OrderRelation::ICX);
        case OrderRelation::ICV: return check_icv(align(p, q));
        case OrderRelation::CX: return check_cx(align(p, q), OrderRelation::CX);
        case OrderRelation::CV: return check_cx(align(q, p), OrderRelation::CV);
        case OrderRelation::LT: return check_lt(align(p, q));
    }
    throw std::invalid_argument("unknown order relation");
}

ImplicationReport implication_chain(const FinitePmf& p, const FinitePmf& q) {
    ImplicationReport r{check_order(p, q, OrderRelation::ST), check_order(p, q, OrderRelation::CV),
                        check_order(p, q, OrderRelation::ICV), check_order(p, q, OrderRelation::LT), {}};
    if (r.st.holds && !r.icv.holds) r.violations.emplace_back("st => icv");
    if (r.cv.holds && !r.icv.holds) r.violations.emplace_back("cv => icv");
    if (r.icv.holds && !r.lt.holds) r.violations.emplace_back("icv => lt");
    return r;
}

double wasserstein_distance(const FinitePmf& p, const FinitePmf& q) {
    const auto a = align(p, q);
    double fp = 0.0, fq = 0.0, dist = 0.0;
    for (std::size_t k = 0; k + 1 < a.p.size(); ++k) {
        fp += a.p[k];
        fq += a.q[k];
        dist += std::abs(fp - fq);
    }
    return dist;
}

ParetoOrderVerdict pareto_order(double alpha1, double c1, double alpha2, double c2) {
    if (!(alpha1 > 1.0) || !(alpha2 > 1.0)) throw std::invalid_argument("pareto ordering needs alpha > 1");
    if (!(c1 > 0.0) || !(c2 > 0.0)) throw std::invalid_argument("pareto ordering needs scale > 0");
    constexpr double rel = 1e-12;
    const double l1 = c1 / (1.0 - 1.0 / alpha1);
    const double l2 = c2 / (1.0 - 1.0 / alpha2);
    const bool mean_leq = leq_rel(l1, l2, rel);
    const bool mean_eq = approx_equal_rel(l1, l2, rel);
    const bool alpha_geq = leq_rel(alpha2, alpha1, rel);
    const bool scale_leq = leq_rel(c1, c2, rel);
    return {mean_leq && alpha_geq, mean_eq && alpha_geq, mean_leq && scale_leq};
}

}  // namespace cmgiant

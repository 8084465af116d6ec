#include "cmgiant/spec_json.hpp"

#include <charconv>
#include <cmath>
#include <initializer_list>
#include <string>

#include "cmgiant/errors.hpp"
#include "overloaded.hpp"

namespace cmgiant {

namespace {

using detail::Overloaded;

constexpr double kRenormalizeLimit = 1e-9;

void expect_keys(const Json& j, std::string_view what, std::initializer_list<std::string_view> keys) {
    if (!j.is_object()) throw SpecError(std::string(what) + " spec must be a JSON object");
    for (const auto& [key, _] : j.items()) {
        bool known = false;
        for (auto k : keys) known = known || key == k;
        if (!known) throw SpecError("unknown key \"" + key + "\" in " + std::string(what) + " spec");
    }
    for (auto k : keys) {
        if (!j.contains(std::string(k)))
            throw SpecError(std::string(what) + " spec is missing \"" + std::string(k) + "\"");
    }
}

double number(const Json& j, const char* key) {
    const auto& v = j.at(key);
    if (!v.is_number()) throw SpecError(std::string("\"") + key + "\" must be a number");
    return v.get<double>();
}

std::string type_of(const Json& j, std::string_view what) {
    if (!j.is_object() || !j.contains("type") || !j.at("type").is_string())
        throw SpecError(std::string(what) + " spec needs a string \"type\"");
    return j.at("type").get<std::string>();
}

std::uint64_t parse_support_point(const std::string& key) {
    std::uint64_t k = 0;
    const auto* end = key.data() + key.size();
    const auto [ptr, ec] = std::from_chars(key.data(), end, k);
    if (key.empty() || ec != std::errc() || ptr != end)
        throw SpecError("pmf key \"" + key + "\" is not a nonnegative integer");
    return k;
}

FinitePmf finite_from_json(const Json& pmf) {
    if (!pmf.is_object() || pmf.empty()) throw SpecError("\"pmf\" must be a nonempty object");
    FinitePmf::Masses masses;
    double sum = 0.0;
    for (const auto& [key, value] : pmf.items()) {
        if (!value.is_number()) throw SpecError("pmf mass at \"" + key + "\" must be a number");
        const double w = value.get<double>();
        if (!(w >= 0.0) || !std::isfinite(w)) throw SpecError("pmf mass at \"" + key + "\" must be finite and >= 0");
        if (!masses.emplace(parse_support_point(key), w).second) throw SpecError("duplicate pmf key \"" + key + "\"");
        sum += w;
    }
    const double gap = std::abs(sum - 1.0);
    if (gap > kRenormalizeLimit) throw SpecError("pmf masses sum to " + std::to_string(sum) + ", not 1");
    if (gap > FinitePmf::kSumTolerance)
        for (auto& [k, w] : masses) w /= sum;
    try {
        return FinitePmf(std::move(masses));
    } catch (const std::invalid_argument& e) {
        throw SpecError(e.what());
    }
}

}  // namespace

MixingDistribution mixing_from_json(const Json& j) {
    const auto type = type_of(j, "mixing");
    MixingDistribution mu;
    if (type == "dirac") {
        expect_keys(j, "dirac", {"type", "x"});
        mu = Dirac{number(j, "x")};
    } else if (type == "pareto") {
        expect_keys(j, "pareto", {"type", "alpha", "scale"});
        mu = Pareto{number(j, "alpha"), number(j, "scale")};
    } else if (type == "lognormal") {
        expect_keys(j, "lognormal", {"type", "location", "scale2"});
        mu = Lognormal{number(j, "location"), number(j, "scale2")};
    } else {
        throw SpecError("unknown mixing type \"" + type + "\"");
    }
    try {
        validate(mu);
    } catch (const std::invalid_argument& e) {
        throw SpecError(e.what());
    }
    return mu;
}

DegreeDistribution distribution_from_json(const Json& j) {
    const auto type = type_of(j, "distribution");
    try {
        if (type == "finite") {
            expect_keys(j, "finite", {"type", "pmf"});
            return finite_from_json(j.at("pmf"));
        }
        if (type == "poisson") {
            expect_keys(j, "poisson", {"type", "lambda"});
            return Poisson{number(j, "lambda")};
        }
        if (type == "binomial") {
            expect_keys(j, "binomial", {"type", "n", "p"});
            const auto& n = j.at("n");
            if (!n.is_number_integer() || n.get<std::int64_t>() < 1) throw SpecError("\"n\" must be an integer >= 1");
            return Binomial{n.get<std::uint64_t>(), number(j, "p")};
        }
        if (type == "mpoi") {
            expect_keys(j, "mpoi", {"type", "mixing"});
            return MixedPoisson{mixing_from_json(j.at("mixing"))};
        }
        if (type == "thinned") {
            expect_keys(j, "thinned", {"type", "r", "base"});
            return DegreeDistribution::thinned(distribution_from_json(j.at("base")), number(j, "r"));
        }
    } catch (const SpecError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw SpecError(e.what());
    }
    throw SpecError("unknown distribution type \"" + type + "\"");
}

DegreeDistribution parse_distribution(std::string_view text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw SpecError(std::string("invalid JSON: ") + e.what());
    }
    return distribution_from_json(j);
}

Json to_json(const MixingDistribution& mu) {
    return std::visit(Overloaded{
                          [](const Dirac& d) { return Json{{"type", "dirac"}, {"x", d.x}}; },
                          [](const Pareto& p) { return Json{{"type", "pareto"}, {"alpha", p.alpha}, {"scale", p.scale}}; },
                          [](const Lognormal& l) {
                              return Json{{"type", "lognormal"}, {"location", l.location}, {"scale2", l.scale2}};
                          },
                      },
                      mu);
}

Json to_json(const FinitePmf& p) {
    Json pmf = Json::object();
    for (const auto& [k, w] : p.masses()) pmf[std::to_string(k)] = w;
    return Json{{"type", "finite"}, {"pmf", pmf}};
}

Json to_json(const DegreeDistribution& d) {
    return std::visit(Overloaded{
                          [](const FinitePmf& p) { return to_json(p); },
                          [](const Poisson& p) { return Json{{"type", "poisson"}, {"lambda", p.lambda}}; },
                          [](const Binomial& b) { return Json{{"type", "binomial"}, {"n", b.n}, {"p", b.p}}; },
                          [](const MixedPoisson& m) { return Json{{"type", "mpoi"}, {"mixing", to_json(m.mixing)}}; },
                          [](const Thinned& t) {
                              return Json{{"type", "thinned"}, {"r", t.r}, {"base", to_json(*t.base)}};
                          },
                      },
                      d.variant());
}

std::string to_spec_string(const DegreeDistribution& d) { return to_json(d).dump(); }

}  // namespace cmgiant

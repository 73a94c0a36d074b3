#include "debtgame/model.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <sstream>

namespace debtgame {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::NonFinite: return "NonFinite";
        case ErrorKind::AssumptionViolation: return "AssumptionViolation";
        case ErrorKind::Domain: return "DomainError";
        case ErrorKind::BracketFailure: return "BracketFailure";
        case ErrorKind::QuadratureFailure: return "QuadratureFailure";
        case ErrorKind::BoundaryRegime: return "BoundaryRegime";
        case ErrorKind::MultipleRoots: return "MultipleRoots";
        case ErrorKind::CapExceeded: return "CapExceeded";
        case ErrorKind::PeakNotFound: return "PeakNotFound";
        case ErrorKind::Config: return "ConfigError";
        case ErrorKind::SimulationBudgetExceeded: return "SimulationBudgetExceeded";
        case ErrorKind::MismatchedStreams: return "MismatchedStreams";
        case ErrorKind::Io: return "IoError";
    }
    return "Unknown";
}

namespace {

std::string describe(const std::vector<AssumptionViolation>& violations) {
    std::ostringstream os;
    os << "parameter assumptions violated:";
    for (const auto& v : violations) {
        os << ' ' << v.name << " (lhs=" << v.lhs << ", rhs=" << v.rhs << ");";
    }
    return os.str();
}

constexpr std::array<const char*, 10> kParamNames = {
    "r", "g", "sigma", "rho", "lambda", "alpha", "kappa", "m", "c1", "c2"};

double* param_slot(RawParams& raw, const std::string& name) {
    if (name == "r") return &raw.r;
    if (name == "g") return &raw.g;
    if (name == "sigma") return &raw.sigma;
    if (name == "rho") return &raw.rho;
    if (name == "lambda") return &raw.lambda;
    if (name == "alpha") return &raw.alpha;
    if (name == "kappa") return &raw.kappa;
    if (name == "m") return &raw.m;
    if (name == "c1") return &raw.c1;
    if (name == "c2") return &raw.c2;
    return nullptr;
}

}  // namespace

ValidationError::ValidationError(ErrorKind kind, std::vector<AssumptionViolation> violations)
    : Error(kind, describe(violations)), violations_(std::move(violations)) {}

RawParams reference_params() {
    RawParams p;
    p.r = 0.025;
    p.g = 0.02;
    p.sigma = 0.2;
    p.rho = 0.3;
    p.lambda = 0.1;
    p.alpha = 0.15;
    p.kappa = 0.6;
    p.m = 0.6;
    p.c1 = 2.0;
    p.c2 = 1.25;
    return p;
}

void set_param(RawParams& raw, const std::string& name, double value) {
    double* slot = param_slot(raw, name);
    if (slot == nullptr) {
        throw Error(ErrorKind::Config, "unknown parameter '" + name + "'");
    }
    *slot = value;
}

double get_param(const RawParams& raw, const std::string& name) {
    RawParams copy = raw;
    const double* slot = param_slot(copy, name);
    if (slot == nullptr) {
        throw Error(ErrorKind::Config, "unknown parameter '" + name + "'");
    }
    return *slot;
}

std::uint64_t ModelParams::hash() const noexcept {
    // FNV-1a over the bit patterns
    std::uint64_t h = 1469598103934665603ULL;
    const std::array<double, 10> values = {raw_.r, raw_.g, raw_.sigma, raw_.rho, raw_.lambda,
                                           raw_.alpha, raw_.kappa, raw_.m, raw_.c1, raw_.c2};
    for (double v : values) {
        const auto bits = std::bit_cast<std::uint64_t>(v);
        for (int i = 0; i < 8; ++i) {
            h ^= (bits >> (8 * i)) & 0xffU;
            h *= 1099511628211ULL;
        }
    }
    return h;
}

ModelParams validate_params(const RawParams& raw) {
    std::vector<AssumptionViolation> bad;
    RawParams copy = raw;
    for (const char* name : kParamNames) {
        const double v = *param_slot(copy, name);
        if (!std::isfinite(v)) {
            bad.push_back({name, v, 0.0});
        }
    }
    if (!bad.empty()) {
        throw ValidationError(ErrorKind::NonFinite, std::move(bad));
    }

    auto require = [&](const char* name, double lhs, double rhs) {
        if (!(lhs > rhs)) bad.push_back({name, lhs, rhs});
    };
    const double net = raw.r - raw.g;
    require("c1>c2", raw.c1, raw.c2);
    require("c2>0", raw.c2, 0.0);
    require("sigma>0", raw.sigma, 0.0);
    require("rho>2(r-g)+sigma^2", raw.rho, 2.0 * net + raw.sigma * raw.sigma);
    require("lambda>r-g", raw.lambda, net);
    require("m>0", raw.m, 0.0);
    require("alpha>0", raw.alpha, 0.0);
    require("kappa>0", raw.kappa, 0.0);
    if (!bad.empty()) {
        throw ValidationError(ErrorKind::AssumptionViolation, std::move(bad));
    }
    return ModelParams(raw);
}

RootPair char_roots(const ModelParams& params, double discount) {
    const auto [pos, neg] = char_roots_as<double>(params, discount);
    return {pos, neg, discount};
}

double char_residual(const ModelParams& params, double discount, double x) {
    const double s2 = params.sigma() * params.sigma();
    return 0.5 * s2 * x * (x - 1.0) + params.net_rate() * x - discount;
}

const char* to_string(RegimeTag tag) {
    switch (tag) {
        case RegimeTag::LegislatorIntervenes: return "LegislatorIntervenes";
        case RegimeTag::LegislatorAbstains: return "LegislatorAbstains";
        case RegimeTag::Boundary: return "Boundary";
    }
    return "Unknown";
}

double regime_boundary(const RawParams& raw) {
    return raw.r - raw.g + raw.alpha / raw.kappa;
}

Regime classify_regime(const ModelParams& params) {
    const double ratio = params.alpha() / params.kappa();
    const double margin = params.lambda() - regime_boundary(params.raw());
    const double tol = 1e-12 * std::max(1.0, ratio);
    if (std::abs(margin) <= tol) return {RegimeTag::Boundary, margin};
    return {margin > 0.0 ? RegimeTag::LegislatorAbstains : RegimeTag::LegislatorIntervenes, margin};
}

}  // namespace debtgame

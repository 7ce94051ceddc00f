#include "netduo/netduo.h"

#include <cstring>
#include <new>
#include <string>

#include "netduo/commands.hpp"
#include "netduo/error.hpp"

struct netduo_game {
    netduo::InteractionMatrix matrix;
};

namespace {

std::string& last_error() {
    thread_local std::string message;
    return message;
}

netduo_status status_of(netduo::ErrorCode code) {
    using netduo::ErrorCode;
    switch (code) {
        case ErrorCode::InvalidArgument: return NETDUO_E_INVALID_ARGUMENT;
        case ErrorCode::DegenerateMatrix: return NETDUO_E_DEGENERATE_MATRIX;
        case ErrorCode::NotApplicable: return NETDUO_E_NOT_APPLICABLE;
        case ErrorCode::NoHotellingSelection: return NETDUO_E_NO_HOTELLING_SELECTION;
        case ErrorCode::ClassAbsent: return NETDUO_E_CLASS_ABSENT;
        case ErrorCode::OutOfDomain: return NETDUO_E_OUT_OF_DOMAIN;
        case ErrorCode::Unbounded: return NETDUO_E_UNBOUNDED;
        case ErrorCode::SamplingExhausted: return NETDUO_E_SAMPLING_EXHAUSTED;
        case ErrorCode::Io: return NETDUO_E_IO;
    }
    return NETDUO_E_INTERNAL;
}

netduo_status fail(netduo_status s, const char* message) {
    last_error() = message;
    return s;
}

// Runs `body`, translating exceptions into status codes.
template <class F>
netduo_status guarded(F&& body) noexcept {
    try {
        last_error().clear();
        body();
        return NETDUO_OK;
    } catch (const netduo::Error& e) {
        return fail(status_of(e.code()), e.what());
    } catch (const nlohmann::json::exception& e) {
        return fail(NETDUO_E_INVALID_ARGUMENT, e.what());
    } catch (const std::bad_alloc&) {
        return fail(NETDUO_E_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(NETDUO_E_INTERNAL, e.what());
    } catch (...) {
        return fail(NETDUO_E_INTERNAL, "unknown error");
    }
}

void require(bool cond, const char* what) {
    if (!cond) throw netduo::Error(netduo::ErrorCode::InvalidArgument, what);
}

char* copy_out(const std::string& s) {
    char* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (p == nullptr) throw std::bad_alloc();
    std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

netduo::LambdaVariant variant_of(netduo_lambda_variant v) {
    switch (v) {
        case NETDUO_LAMBDA_PAPER_TIGHT: return netduo::LambdaVariant::PaperTight;
        case NETDUO_LAMBDA_SIMPLE: return netduo::LambdaVariant::Simple;
        case NETDUO_LAMBDA_LITERAL: return netduo::LambdaVariant::Literal;
        case NETDUO_LAMBDA_MAX_ENUM: break;
    }
    throw netduo::Error(netduo::ErrorCode::InvalidArgument, "unknown lambda variant");
}

netduo::MatrixConstraint constraint_of(unsigned bits) {
    require((bits & ~7u) == 0, "unknown constraint bits");
    return static_cast<netduo::MatrixConstraint>(bits);
}

const netduo::InteractionMatrix& matrix_of(const netduo_game* g) {
    require(g != nullptr, "game handle is null");
    return g->matrix;
}

netduo::PricePair prices(double p_a, double p_b) { return netduo::PricePair::make(p_a, p_b); }

}  // namespace

extern "C" {

const char* netduo_last_error(void) { return last_error().c_str(); }

const char* netduo_status_name(netduo_status status) {
    switch (status) {
        case NETDUO_OK: return "Ok";
        case NETDUO_E_INVALID_ARGUMENT: return "InvalidArgument";
        case NETDUO_E_DEGENERATE_MATRIX: return "DegenerateMatrix";
        case NETDUO_E_NOT_APPLICABLE: return "NotApplicable";
        case NETDUO_E_NO_HOTELLING_SELECTION: return "NoHotellingSelection";
        case NETDUO_E_CLASS_ABSENT: return "ClassAbsent";
        case NETDUO_E_OUT_OF_DOMAIN: return "OutOfDomain";
        case NETDUO_E_UNBOUNDED: return "Unbounded";
        case NETDUO_E_SAMPLING_EXHAUSTED: return "SamplingExhausted";
        case NETDUO_E_IO: return "Io";
        case NETDUO_E_INTERNAL: return "Internal";
        case NETDUO_STATUS_MAX_ENUM: break;
    }
    return "Unknown";
}

const char* netduo_version(void) { return "1.0.0"; }

void netduo_string_free(char* s) { std::free(s); }

netduo_status netduo_game_create(double a11, double a12, double a21, double a22,
                                 netduo_game** out) {
    return guarded([&] {
        require(out != nullptr, "out is null");
        *out = new netduo_game{netduo::InteractionMatrix::make(a11, a12, a21, a22)};
    });
}

netduo_status netduo_game_from_json(const char* json, netduo_game** out) {
    return guarded([&] {
        require(json != nullptr && out != nullptr, "null argument");
        *out = new netduo_game{netduo::matrix_from_json(netduo::Json::parse(json))};
    });
}

void netduo_game_destroy(netduo_game* game) { delete game; }

netduo_status netduo_game_entries(const netduo_game* game, double out[4]) {
    return guarded([&] {
        require(out != nullptr, "out is null");
        const auto e = matrix_of(game).entries();
        std::copy(e.begin(), e.end(), out);
    });
}

netduo_status netduo_determinant(const netduo_game* game, double* out) {
    return guarded([&] {
        require(out != nullptr, "out is null");
        *out = netduo::determinant(matrix_of(game));
    });
}

netduo_status netduo_kappas(const netduo_game* game, double* kappa1, double* kappa2) {
    return guarded([&] {
        require(kappa1 != nullptr && kappa2 != nullptr, "out is null");
        const auto k = netduo::kappas(matrix_of(game));
        *kappa1 = k.k1;
        *kappa2 = k.k2;
    });
}

netduo_status netduo_lambda(const netduo_game* game, netduo_lambda_variant variant, double* out) {
    return guarded([&] {
        require(out != nullptr, "out is null");
        *out = netduo::lambda(matrix_of(game), variant_of(variant));
    });
}

netduo_status netduo_canonical(const netduo_game* game, netduo_game** out, int* swapped) {
    return guarded([&] {
        require(out != nullptr, "out is null");
        const auto o = netduo::canonical_orientation(matrix_of(game));
        *out = new netduo_game{o.matrix};
        if (swapped != nullptr) *swapped = o.swapped ? 1 : 0;
    });
}

netduo_status netduo_star_price(const netduo_game* game, double* out) {
    return guarded([&] {
        require(out != nullptr, "out is null");
        *out = netduo::star_price(matrix_of(game));
    });
}

netduo_status netduo_existence_check(const netduo_game* game, netduo_lambda_variant variant,
                                     int* holds) {
    return guarded([&] {
        require(holds != nullptr, "out is null");
        *holds = netduo::existence_check(matrix_of(game), variant_of(variant)).holds ? 1 : 0;
    });
}

netduo_status netduo_equilibrium_classes(const netduo_game* game, double p_a, double p_b,
                                         netduo_class* classes, size_t* count) {
    return guarded([&] {
        require(count != nullptr, "count is null");
        const auto set = netduo::enumerate_equilibria(matrix_of(game), prices(p_a, p_b));
        *count = set.families.size();
        if (classes != nullptr) {
            for (std::size_t k = 0; k < set.families.size(); ++k) {
                classes[k] = static_cast<netduo_class>(set.families[k].cls);
            }
        }
    });
}

netduo_status netduo_select(const netduo_game* game, double p_a, double p_b, const char* policy,
                            double* s1, double* s2, netduo_class* cls) {
    return guarded([&] {
        require(policy != nullptr && s1 != nullptr && s2 != nullptr, "null argument");
        const auto& m = matrix_of(game);
        const auto sel = netduo::select(m, prices(p_a, p_b), netduo::parse_policy(policy, m));
        *s1 = sel.profile.s1;
        *s2 = sel.profile.s2;
        if (cls != nullptr) *cls = static_cast<netduo_class>(sel.cls);
    });
}

netduo_status netduo_demand(const netduo_game* game, double p_a, double p_b, const char* policy,
                            double* d_a, double* d_b) {
    return guarded([&] {
        require(policy != nullptr && d_a != nullptr && d_b != nullptr, "null argument");
        const auto& m = matrix_of(game);
        const auto d = netduo::demand(m, prices(p_a, p_b), netduo::parse_policy(policy, m));
        *d_a = d.d_a;
        *d_b = d.d_b;
    });
}

netduo_status netduo_analyze_json(const netduo_game* game, char** out) {
    return guarded([&] {
        require(out != nullptr, "out is null");
        *out = copy_out(netduo::analyze_report(matrix_of(game)));
    });
}

netduo_status netduo_equilibria_json(const netduo_game* game, double p_a, double p_b, char** out) {
    return guarded([&] {
        require(out != nullptr, "out is null");
        *out = copy_out(netduo::equilibria_report(matrix_of(game), prices(p_a, p_b)));
    });
}

netduo_status netduo_correspondence_csv(const netduo_game* game, double p_b, double lo, double hi,
                                        double step, char** out) {
    return guarded([&] {
        require(out != nullptr, "out is null");
        prices(0.0, p_b);
        *out = copy_out(netduo::correspondence_csv(matrix_of(game), p_b,
                                                   netduo::PriceGrid::make(lo, hi, step)));
    });
}

netduo_status netduo_price_eq_json(const netduo_game* game, const char* policy, char** out) {
    return guarded([&] {
        require(out != nullptr, "out is null");
        const auto& m = matrix_of(game);
        *out = copy_out(netduo::price_eq_report(
            m, netduo::parse_policy(policy != nullptr ? policy : "appendix-a", m)));
    });
}

netduo_status netduo_curve_csv(const netduo_game* game, double p_b, const char* policy, double lo,
                               double hi, double step, char** out) {
    return guarded([&] {
        require(out != nullptr, "out is null");
        prices(0.0, p_b);
        const auto& m = matrix_of(game);
        *out = copy_out(netduo::curve_csv(
            m, p_b, netduo::parse_policy(policy != nullptr ? policy : "appendix-a", m),
            netduo::PriceGrid::make(lo, hi, step)));
    });
}

netduo_verify_options netduo_verify_options_default(void) {
    return netduo_verify_options{nullptr, -1.0, 0.0, 0.0, 200};
}

netduo_status netduo_verify_json(const netduo_game* game, const netduo_verify_options* options,
                                 char** out, int* passed) {
    return guarded([&] {
        require(out != nullptr, "out is null");
        netduo::VerifyOptions opt;
        if (options != nullptr) {
            if (options->policy != nullptr) opt.policy = options->policy;
            if (options->lo >= 0.0) opt.lo = options->lo;
            if (options->hi > 0.0) opt.hi = options->hi;
            if (options->step > 0.0) opt.step = options->step;
            if (options->lattice_n > 0) opt.lattice_n = options->lattice_n;
        }
        require(opt.lattice_n >= 2, "lattice_n must be at least 2");
        const auto r = netduo::verify_report(matrix_of(game), opt);
        *out = copy_out(r.report);
        if (passed != nullptr) *passed = r.passed ? 1 : 0;
    });
}

netduo_status netduo_sweep_csv(const double entries[4], int free_entry, double lo, double hi,
                               double step, int verify, char** out) {
    return guarded([&] {
        require(entries != nullptr && out != nullptr, "null argument");
        const std::array<double, 4> tmpl{entries[0], entries[1], entries[2], entries[3]};
        *out = copy_out(netduo::sweep_csv(tmpl, free_entry, lo, hi, step, verify != 0));
    });
}

netduo_status netduo_oracle_json(const netduo_game* game, uint64_t seed, size_t count,
                                 unsigned constraint, int lattice_n, char** out, int* passed) {
    return guarded([&] {
        require(out != nullptr, "out is null");
        netduo::OracleOptions opt;
        opt.seed = seed;
        opt.count = count;
        opt.constraint = constraint_of(constraint);
        if (lattice_n > 0) opt.lattice_n = lattice_n;
        require(opt.lattice_n >= 2, "lattice_n must be at least 2");
        std::optional<netduo::InteractionMatrix> m;
        if (game != nullptr) m = game->matrix;
        const auto r = netduo::oracle_report(m, opt);
        *out = copy_out(r.report);
        if (passed != nullptr) *passed = r.passed ? 1 : 0;
    });
}

netduo_status netduo_random_matrix(uint64_t seed, unsigned constraint, netduo_game** out) {
    return guarded([&] {
        require(out != nullptr, "out is null");
        *out = new netduo_game{netduo::random_matrix(seed, constraint_of(constraint))};
    });
}

}  // extern "C"

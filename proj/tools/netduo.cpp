#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "netduo/netduo.h"

namespace {

using Json = nlohmann::json;

enum Exit { kOk = 0, kFailed = 1, kBadInput = 2, kIo = 3 };

struct Failure {
    int code;
    std::string message;
};

[[noreturn]] void bad_input(const std::string& message) { throw Failure{kBadInput, message}; }

void check(netduo_status s) {
    if (s == NETDUO_OK) return;
    const int code = s == NETDUO_E_IO ? kIo : kBadInput;
    throw Failure{code, std::string(netduo_status_name(s)) + ": " + netduo_last_error()};
}

struct GameDeleter {
    void operator()(netduo_game* g) const { netduo_game_destroy(g); }
};
using Game = std::unique_ptr<netduo_game, GameDeleter>;

struct CString {
    char* p = nullptr;
    ~CString() { netduo_string_free(p); }
    std::string str() const { return p ? std::string(p) : std::string(); }
};

struct RunConfig {
    std::string command;
    std::vector<std::string> matrix;  // four tokens, "x" marks the free entry for sweep
    std::string out;
    std::optional<std::uint64_t> seed;
    std::string policy = "appendix-a";
    std::optional<double> step;
    std::optional<std::pair<double, double>> range;
    std::optional<double> p_a;
    std::optional<double> p_b;
    std::optional<std::string> free_entry;
    bool verify = false;
    std::size_t count = 200;
    std::string constraint = "none";
    int lattice = 200;
    std::string curve;
};

const char* kEntryNames[4] = {"a11", "a12", "a21", "a22"};

double parse_double(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        bad_input(what + ": '" + s + "' is not a number");
    }
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) parts.push_back(item);
    if (!s.empty() && s.back() == sep) parts.emplace_back();
    return parts;
}

bool is_free_token(const std::string& t) { return t == "x" || t == "free" || t == "*"; }

std::vector<std::string> matrix_tokens(const std::string& text) {
    auto parts = split(text, ',');
    if (parts.size() != 4) bad_input("--matrix expects a11,a12,a21,a22");
    return parts;
}

std::pair<double, double> parse_range(const std::string& text) {
    const auto parts = split(text, ',');
    if (parts.size() != 2) bad_input("--range expects LO,HI");
    return {parse_double(parts[0], "--range"), parse_double(parts[1], "--range")};
}

std::string token_of(const Json& v, const std::string& what) {
    if (v.is_number()) {
        std::ostringstream os;
        os.precision(17);
        os << v.get<double>();
        return os.str();
    }
    if (v.is_string()) return v.get<std::string>();
    bad_input("config: " + what + " must be a number or string");
}

void load_config(const std::string& path, RunConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw Failure{kIo, "cannot read config '" + path + "'"};
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::exception& e) {
        bad_input("config '" + path + "': " + e.what());
    }
    if (!j.is_object()) bad_input("config must be a JSON object");
    try {
        if (j.contains("matrix")) {
            const Json& m = j["matrix"];
            cfg.matrix.clear();
            if (m.is_object()) {
                for (const char* k : kEntryNames) {
                    if (!m.contains(k)) bad_input(std::string("config matrix is missing ") + k);
                    cfg.matrix.push_back(token_of(m[k], k));
                }
            } else if (m.is_array() && m.size() == 4) {
                for (const auto& v : m) cfg.matrix.push_back(token_of(v, "matrix"));
            } else {
                bad_input("config matrix must be an object a11..a22 or an array of four");
            }
        }
        if (j.contains("out")) cfg.out = j["out"].get<std::string>();
        if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("policy")) cfg.policy = j["policy"].get<std::string>();
        if (j.contains("step")) cfg.step = j["step"].get<double>();
        if (j.contains("range")) {
            const auto r = j["range"].get<std::vector<double>>();
            if (r.size() != 2) bad_input("config range must have two numbers");
            cfg.range = std::make_pair(r[0], r[1]);
        }
        if (j.contains("p_a")) cfg.p_a = j["p_a"].get<double>();
        if (j.contains("p_b")) cfg.p_b = j["p_b"].get<double>();
        if (j.contains("free")) cfg.free_entry = j["free"].get<std::string>();
        if (j.contains("verify")) cfg.verify = j["verify"].get<bool>();
        if (j.contains("count")) cfg.count = j["count"].get<std::size_t>();
        if (j.contains("constraint")) cfg.constraint = j["constraint"].get<std::string>();
        if (j.contains("lattice")) cfg.lattice = j["lattice"].get<int>();
        if (j.contains("curve")) cfg.curve = j["curve"].get<std::string>();
    } catch (const Json::exception& e) {
        bad_input("config '" + path + "': " + e.what());
    }
}

Game make_game(const RunConfig& cfg) {
    if (cfg.matrix.empty()) bad_input("a matrix is required (--matrix or config)");
    double a[4];
    for (int k = 0; k < 4; ++k) {
        if (is_free_token(cfg.matrix[k])) bad_input("matrix has a free entry outside sweep");
        a[k] = parse_double(cfg.matrix[k], "--matrix");
    }
    netduo_game* g = nullptr;
    check(netduo_game_create(a[0], a[1], a[2], a[3], &g));
    return Game(g);
}

double star_price(const netduo_game* g) {
    double p = 0.0;
    check(netduo_star_price(g, &p));
    return p;
}

unsigned parse_constraint(const std::string& text) {
    unsigned bits = 0;
    for (const auto& part : split(text, '|')) {
        if (part == "none") continue;
        if (part == "kappa_sum_neg") {
            bits |= NETDUO_CONSTRAINT_KAPPA_SUM_NEG;
        } else if (part == "existence_ok") {
            bits |= NETDUO_CONSTRAINT_EXISTENCE_OK;
        } else if (part == "pos_det_neg_sum") {
            bits |= NETDUO_CONSTRAINT_POS_DET_NEG_SUM;
        } else {
            bad_input("unknown constraint '" + part + "'");
        }
    }
    return bits;
}

void write_atomically(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text << std::flush;
        if (!std::cout) throw Failure{kIo, "failed writing to stdout"};
        return;
    }
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp." + std::to_string(static_cast<long long>(::getpid()));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Failure{kIo, "cannot open '" + tmp.string() + "' for writing"};
        out << text;
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw Failure{kIo, "failed writing '" + tmp.string() + "'"};
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw Failure{kIo, "cannot move output into place at '" + path + "'"};
    }
}

int run_analyze(const RunConfig& cfg) {
    const Game g = make_game(cfg);
    CString s;
    check(netduo_analyze_json(g.get(), &s.p));
    write_atomically(cfg.out, s.str());
    return kOk;
}

int run_equilibria(const RunConfig& cfg) {
    const Game g = make_game(cfg);
    if (!cfg.p_a || !cfg.p_b) bad_input("equilibria needs --pa and --pb");
    CString s;
    check(netduo_equilibria_json(g.get(), *cfg.p_a, *cfg.p_b, &s.p));
    write_atomically(cfg.out, s.str());
    return kOk;
}

int run_correspondence(const RunConfig& cfg) {
    const Game g = make_game(cfg);
    const double p_b = cfg.p_b ? *cfg.p_b : star_price(g.get());
    const auto range = cfg.range.value_or(std::make_pair(0.0, 3.0 * std::max(p_b, 1.0)));
    const double step = cfg.step.value_or((range.second - range.first) / 600.0);
    CString s;
    check(netduo_correspondence_csv(g.get(), p_b, range.first, range.second, step, &s.p));
    write_atomically(cfg.out, s.str());
    return kOk;
}

int run_price_eq(const RunConfig& cfg) {
    const Game g = make_game(cfg);
    CString s;
    check(netduo_price_eq_json(g.get(), cfg.policy.c_str(), &s.p));
    if (!cfg.curve.empty()) {
        const double p_star = star_price(g.get());
        const double p_b = cfg.p_b.value_or(p_star);
        const auto range = cfg.range.value_or(std::make_pair(0.0, 3.0 * p_star));
        const double step = cfg.step.value_or(p_star / 4000.0);
        CString c;
        check(netduo_curve_csv(g.get(), p_b, cfg.policy.c_str(), range.first, range.second, step,
                               &c.p));
        write_atomically(cfg.curve, c.str());
    }
    write_atomically(cfg.out, s.str());
    return kOk;
}

int run_verify(const RunConfig& cfg) {
    const Game g = make_game(cfg);
    netduo_verify_options opt = netduo_verify_options_default();
    opt.policy = cfg.policy.c_str();
    if (cfg.range) {
        if (cfg.range->first < 0.0 || cfg.range->second <= cfg.range->first) {
            bad_input("--range must satisfy 0 <= LO < HI");
        }
        opt.lo = cfg.range->first;
        opt.hi = cfg.range->second;
    }
    if (cfg.step) {
        if (!(*cfg.step > 0.0)) bad_input("--step must be positive");
        opt.step = *cfg.step;
    }
    opt.lattice_n = cfg.lattice;
    CString s;
    int passed = 0;
    check(netduo_verify_json(g.get(), &opt, &s.p, &passed));
    write_atomically(cfg.out, s.str());
    return passed ? kOk : kFailed;
}

int entry_index(const std::string& name) {
    for (int k = 0; k < 4; ++k) {
        if (name == kEntryNames[k]) return k;
    }
    bad_input("unknown entry '" + name + "' (expected a11, a12, a21 or a22)");
}

int run_sweep(const RunConfig& cfg) {
    if (cfg.matrix.empty()) bad_input("sweep needs a template matrix");
    std::vector<int> marked;
    for (int k = 0; k < 4; ++k) {
        if (is_free_token(cfg.matrix[k])) marked.push_back(k);
    }
    int free_entry = -1;
    if (cfg.free_entry) free_entry = entry_index(*cfg.free_entry);
    if (marked.size() > 1) bad_input("exactly one matrix entry may be free");
    if (marked.size() == 1) {
        if (free_entry >= 0 && free_entry != marked[0]) {
            bad_input("--free disagrees with the free entry marked in the matrix");
        }
        free_entry = marked[0];
    }
    if (free_entry < 0) bad_input("sweep needs one free entry (--free or 'x' in the matrix)");
    double tmpl[4];
    for (int k = 0; k < 4; ++k) {
        tmpl[k] = k == free_entry && is_free_token(cfg.matrix[k])
                      ? 0.0
                      : parse_double(cfg.matrix[k], "--matrix");
    }
    if (!cfg.range) bad_input("sweep needs --range LO,HI");
    const double step = cfg.step.value_or((cfg.range->second - cfg.range->first) / 100.0);
    CString s;
    check(netduo_sweep_csv(tmpl, free_entry, cfg.range->first, cfg.range->second, step,
                           cfg.verify ? 1 : 0, &s.p));
    write_atomically(cfg.out, s.str());
    return kOk;
}

std::uint64_t resolve_seed(const RunConfig& cfg) {
    if (cfg.seed) return *cfg.seed;
    if (const char* env = std::getenv("NETDUO_SEED"); env != nullptr && *env != '\0') {
        try {
            std::size_t used = 0;
            const auto v = std::stoull(env, &used);
            if (used == std::string(env).size()) return v;
        } catch (const std::exception&) {
        }
        bad_input(std::string("NETDUO_SEED is not an unsigned integer: ") + env);
    }
    return 0;
}

int run_oracle(const RunConfig& cfg) {
    Game g;
    if (!cfg.matrix.empty()) g = make_game(cfg);
    if (cfg.count == 0) bad_input("--count must be positive");
    CString s;
    int passed = 0;
    check(netduo_oracle_json(g.get(), resolve_seed(cfg), cfg.count,
                             parse_constraint(cfg.constraint), cfg.lattice, &s.p, &passed));
    write_atomically(cfg.out, s.str());
    return passed ? kOk : kFailed;
}

int dispatch(const RunConfig& cfg) {
    if (cfg.command == "analyze") return run_analyze(cfg);
    if (cfg.command == "equilibria") return run_equilibria(cfg);
    if (cfg.command == "correspondence") return run_correspondence(cfg);
    if (cfg.command == "price-eq") return run_price_eq(cfg);
    if (cfg.command == "verify") return run_verify(cfg);
    if (cfg.command == "sweep") return run_sweep(cfg);
    if (cfg.command == "oracle") return run_oracle(cfg);
    bad_input("unknown command '" + cfg.command + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"netduo: duopoly pricing with two network-linked consumer groups"};
    app.set_version_flag("--version", std::string(netduo_version()));

    std::string command, matrix, config, range, policy, constraint, free_entry, out, curve;
    std::uint64_t seed = 0;
    double step = 0.0, p_a = 0.0, p_b = 0.0;
    std::size_t count = 0;
    int lattice = 0;
    bool verify = false;

    app.add_option("command", command,
                   "analyze | equilibria | correspondence | price-eq | verify | sweep | oracle")
        ->required();
    auto* o_matrix = app.add_option("--matrix", matrix, "a11,a12,a21,a22 (use x for the swept entry)");
    auto* o_config = app.add_option("--config", config, "JSON config file; flags override it");
    auto* o_out = app.add_option("--out", out, "output path (default stdout)");
    auto* o_seed = app.add_option("--seed", seed, "random seed (fallback: NETDUO_SEED)");
    auto* o_policy = app.add_option("--policy", policy, "selection policy token");
    auto* o_step = app.add_option("--step", step, "grid step");
    auto* o_range = app.add_option("--range", range, "LO,HI");
    auto* o_pa = app.add_option("--pa", p_a, "price of firm a");
    auto* o_pb = app.add_option("--pb", p_b, "price of firm b");
    auto* o_free = app.add_option("--free", free_entry, "swept entry: a11 | a12 | a21 | a22");
    auto* o_verify = app.add_flag("--verify", verify, "sweep: run the deviation check per row");
    auto* o_count = app.add_option("--count", count, "oracle: number of random matrices");
    auto* o_constraint =
        app.add_option("--constraint", constraint,
                       "oracle: none | kappa_sum_neg | existence_ok | pos_det_neg_sum (join with |)");
    auto* o_lattice = app.add_option("--lattice", lattice, "lattice points per axis minus one");
    auto* o_curve = app.add_option("--curve", curve, "price-eq: also write the profit curve CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kBadInput;
    }

    try {
        RunConfig cfg;
        if (o_config->count() > 0) load_config(config, cfg);
        cfg.command = command;
        if (o_matrix->count() > 0) cfg.matrix = matrix_tokens(matrix);
        if (o_out->count() > 0) cfg.out = out;
        if (o_seed->count() > 0) cfg.seed = seed;
        if (o_policy->count() > 0) cfg.policy = policy;
        if (o_step->count() > 0) cfg.step = step;
        if (o_range->count() > 0) cfg.range = parse_range(range);
        if (o_pa->count() > 0) cfg.p_a = p_a;
        if (o_pb->count() > 0) cfg.p_b = p_b;
        if (o_free->count() > 0) cfg.free_entry = free_entry;
        if (o_verify->count() > 0) cfg.verify = verify;
        if (o_count->count() > 0) cfg.count = count;
        if (o_constraint->count() > 0) cfg.constraint = constraint;
        if (o_lattice->count() > 0) cfg.lattice = lattice;
        if (o_curve->count() > 0) cfg.curve = curve;
        return dispatch(cfg);
    } catch (const Failure& f) {
        std::cerr << "netduo: " << f.message << "\n";
        return f.code;
    } catch (const std::exception& e) {
        std::cerr << "netduo: " << e.what() << "\n";
        return kBadInput;
    }
}

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <thread>

#include <json.hpp>

#include "netduo/netduo.h"

namespace {

struct Game {
    netduo_game* g = nullptr;
    Game(double a11, double a12, double a21, double a22) {
        REQUIRE(netduo_game_create(a11, a12, a21, a22, &g) == NETDUO_OK);
    }
    ~Game() { netduo_game_destroy(g); }
    operator const netduo_game*() const { return g; }
};

std::string take(char* s) {
    std::string out = s;
    netduo_string_free(s);
    return out;
}

}  // namespace

TEST_CASE("status names and version") {
    CHECK(std::string(netduo_status_name(NETDUO_OK)) == "Ok");
    CHECK(std::string(netduo_status_name(NETDUO_E_CLASS_ABSENT)) == "ClassAbsent");
    CHECK(std::string(netduo_status_name(static_cast<netduo_status>(99))) == "Unknown");
    CHECK(std::strlen(netduo_version()) > 0);
}

TEST_CASE("game creation errors") {
    netduo_game* g = nullptr;
    CHECK(netduo_game_create(1, 1, 1, 1, &g) == NETDUO_E_DEGENERATE_MATRIX);
    CHECK(g == nullptr);
    CHECK(std::string(netduo_last_error()).size() > 0);
    CHECK(netduo_game_create(-1, 0, 0, 1, &g) == NETDUO_E_INVALID_ARGUMENT);
    CHECK(netduo_game_create(1, 0, 0, 1, nullptr) == NETDUO_E_INVALID_ARGUMENT);
    CHECK(netduo_game_from_json("{\"a11\": 7, \"a12\": 4}", &g) == NETDUO_E_INVALID_ARGUMENT);
    CHECK(netduo_game_from_json("not json", &g) == NETDUO_E_INVALID_ARGUMENT);
    REQUIRE(netduo_game_from_json("{\"a11\": 7, \"a12\": 4, \"a21\": 1, \"a22\": 0}", &g) ==
            NETDUO_OK);
    double e[4];
    CHECK(netduo_game_entries(g, e) == NETDUO_OK);
    CHECK(e[0] == 7);
    CHECK(e[3] == 0);
    netduo_game_destroy(g);
    netduo_game_destroy(nullptr);
}

TEST_CASE("model quantities") {
    Game g(7, 4, 1, 0);
    double v = 0, k1 = 0, k2 = 0;
    CHECK(netduo_determinant(g, &v) == NETDUO_OK);
    CHECK(v == -4);
    CHECK(netduo_kappas(g, &k1, &k2) == NETDUO_OK);
    CHECK(k1 == 1);
    CHECK(k2 == -1.5);
    CHECK(netduo_lambda(g, NETDUO_LAMBDA_PAPER_TIGHT, &v) == NETDUO_OK);
    CHECK(v == 3);
    CHECK(netduo_star_price(g, &v) == NETDUO_OK);
    CHECK(v == 4);
    int holds = 0;
    CHECK(netduo_existence_check(g, NETDUO_LAMBDA_PAPER_TIGHT, &holds) == NETDUO_OK);
    CHECK(holds == 1);

    Game h(2, 4, 1, 2.5);
    netduo_game* c = nullptr;
    int swapped = 0;
    REQUIRE(netduo_canonical(h, &c, &swapped) == NETDUO_OK);
    CHECK(swapped == 1);
    double e[4];
    netduo_game_entries(c, e);
    CHECK(e[0] == 2.5);
    CHECK(e[2] == 4);
    netduo_game_destroy(c);

    Game id(1, 0, 0, 1);
    CHECK(netduo_star_price(id, &v) == NETDUO_E_NO_HOTELLING_SELECTION);
    CHECK(std::string(netduo_last_error()).find("kappa") != std::string::npos);
    CHECK(netduo_canonical(id, &c, &swapped) == NETDUO_E_NOT_APPLICABLE);
    CHECK(netduo_lambda(id, NETDUO_LAMBDA_PAPER_TIGHT, &v) == NETDUO_E_NOT_APPLICABLE);
    CHECK(netduo_lambda(g, static_cast<netduo_lambda_variant>(9), &v) ==
          NETDUO_E_INVALID_ARGUMENT);
    CHECK(netduo_determinant(nullptr, &v) == NETDUO_E_INVALID_ARGUMENT);
}

TEST_CASE("equilibria and selection") {
    Game g(7, 4, 1, 0);
    netduo_class cls[9];
    size_t n = 0;
    REQUIRE(netduo_equilibrium_classes(g, 4, 4, cls, &n) == NETDUO_OK);
    REQUIRE(n == 3);
    CHECK(cls[0] == NETDUO_C00);
    CHECK(cls[1] == NETDUO_C11);
    CHECK(cls[2] == NETDUO_SS);
    CHECK(netduo_equilibrium_classes(g, 6, 4, nullptr, &n) == NETDUO_OK);
    CHECK(n == 3);

    double s1 = 0, s2 = 0;
    netduo_class c{};
    CHECK(netduo_select(g, 4, 4, "both-split", &s1, &s2, &c) == NETDUO_OK);
    CHECK(s1 == 0.5);
    CHECK(s2 == 0.5);
    CHECK(c == NETDUO_SS);
    CHECK(netduo_select(g, 0, 20, "min", &s1, &s2, &c) == NETDUO_OK);
    CHECK(c == NETDUO_C11);
    CHECK(netduo_select(g, 6, 4, "both-split", &s1, &s2, &c) == NETDUO_E_CLASS_ABSENT);
    CHECK(netduo_select(g, 4, 4, "nearest", &s1, &s2, &c) == NETDUO_E_INVALID_ARGUMENT);
    CHECK(netduo_select(g, -1, 4, "min", &s1, &s2, &c) == NETDUO_E_INVALID_ARGUMENT);

    double da = 0, db = 0;
    CHECK(netduo_demand(g, 4.5, 4, "both-split", &da, &db) == NETDUO_OK);
    CHECK(da == doctest::Approx(0.875).epsilon(1e-14));
    CHECK(da + db == 2);
}

TEST_CASE("report producers") {
    Game g(7, 4, 1, 0);
    char* out = nullptr;
    REQUIRE(netduo_analyze_json(g, &out) == NETDUO_OK);
    auto j = nlohmann::json::parse(take(out));
    CHECK(j.is_object());

    REQUIRE(netduo_equilibria_json(g, 4, 4, &out) == NETDUO_OK);
    j = nlohmann::json::parse(take(out));
    CHECK(j["dp"] == 0.0);
    CHECK(j["families"].size() == 3);

    REQUIRE(netduo_correspondence_csv(g, 4, 0, 12, 0.5, &out) == NETDUO_OK);
    const auto csv = take(out);
    CHECK(csv.rfind("p_a,", 0) == 0);

    REQUIRE(netduo_price_eq_json(g, "appendix-a", &out) == NETDUO_OK);
    j = nlohmann::json::parse(take(out));
    CHECK(j.is_object());

    REQUIRE(netduo_curve_csv(g, 4, "min", 0, 8, 0.5, &out) == NETDUO_OK);
    CHECK(take(out).rfind("p_a,profit_a,demand_a,selected_class", 0) == 0);
    CHECK(netduo_curve_csv(g, 4, "min", 8, 0, 0.5, &out) == NETDUO_E_INVALID_ARGUMENT);
}

TEST_CASE("verify through the C interface") {
    Game g(7, 4, 1, 0);
    auto opt = netduo_verify_options_default();
    opt.lattice_n = 60;
    char* out = nullptr;
    int passed = 0;
    REQUIRE(netduo_verify_json(g, &opt, &out, &passed) == NETDUO_OK);
    CHECK(passed == 1);
    const auto j = nlohmann::json::parse(take(out));
    CHECK(j.is_object());

    Game id(1, 0, 0, 1);
    REQUIRE(netduo_verify_json(id, &opt, &out, &passed) == NETDUO_OK);
    CHECK(passed == 0);
    CHECK(take(out).find("NoHotellingSelection") != std::string::npos);
}

TEST_CASE("sweep and oracle through the C interface") {
    const double entries[4] = {0, 4, 1, 0};
    char* out = nullptr;
    REQUIRE(netduo_sweep_csv(entries, 0, 6, 7, 0.05, 0, &out) == NETDUO_OK);
    CHECK(take(out).size() > 0);
    CHECK(netduo_sweep_csv(entries, 4, 6, 7, 0.05, 0, &out) == NETDUO_E_INVALID_ARGUMENT);

    int passed = 0;
    REQUIRE(netduo_oracle_json(nullptr, 3, 4, NETDUO_CONSTRAINT_KAPPA_SUM_NEG, 40, &out,
                               &passed) == NETDUO_OK);
    const auto first = take(out);
    CHECK(passed == 1);
    REQUIRE(netduo_oracle_json(nullptr, 3, 4, NETDUO_CONSTRAINT_KAPPA_SUM_NEG, 40, &out,
                               &passed) == NETDUO_OK);
    CHECK(take(out) == first);
    CHECK(netduo_oracle_json(nullptr, 3, 4, 64, 40, &out, &passed) == NETDUO_E_INVALID_ARGUMENT);

    netduo_game* m = nullptr;
    REQUIRE(netduo_random_matrix(17, NETDUO_CONSTRAINT_EXISTENCE_OK, &m) == NETDUO_OK);
    int holds = 0;
    CHECK(netduo_existence_check(m, NETDUO_LAMBDA_PAPER_TIGHT, &holds) == NETDUO_OK);
    CHECK(holds == 1);
    netduo_game_destroy(m);
}

TEST_CASE("last error is per thread and cleared by a successful call") {
    netduo_game* g = nullptr;
    netduo_game_create(1, 1, 1, 1, &g);
    CHECK(std::string(netduo_last_error()).find("determinant") != std::string::npos);
    std::string other = "unset";
    std::thread([&] { other = netduo_last_error(); }).join();
    CHECK(other.empty());
    double v = 0;
    Game ok(7, 4, 1, 0);
    CHECK(netduo_determinant(ok, &v) == NETDUO_OK);
    CHECK(std::string(netduo_last_error()).empty());
}

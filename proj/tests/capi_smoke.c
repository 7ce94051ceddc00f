#include <stdio.h>

#include "netduo/netduo.h"

int main(void) {
    netduo_game* g = NULL;
    double p = 0;
    if (netduo_game_create(7, 4, 1, 0, &g) != NETDUO_OK) return 1;
    if (netduo_star_price(g, &p) != NETDUO_OK || p != 4) return 1;
    char* out = NULL;
    if (netduo_analyze_json(g, &out) != NETDUO_OK) return 1;
    netduo_string_free(out);
    netduo_game_destroy(g);
    puts("ok");
    return 0;
}

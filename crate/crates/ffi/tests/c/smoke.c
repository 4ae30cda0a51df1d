#include <stdio.h>
#include "spandisc.h"

int main(void) {
    SdGraph *g = NULL;
    if (sd_graph_gnp(500, 0.1, 11, &g) != SD_STATUS_OK) {
        fprintf(stderr, "gnp: %s\n", sd_last_error());
        return 1;
    }
    SdColoring *c = NULL;
    if (sd_coloring_make(g, SD_ADVERSARY_UNIFORM_RANDOM, 4, 1, &c) != SD_STATUS_OK) {
        fprintf(stderr, "coloring: %s\n", sd_last_error());
        return 1;
    }
    SdBoostResult r;
    if (sd_boost(g, c, 0.02, 0.15, 9, &r) != SD_STATUS_OK) {
        fprintf(stderr, "boost: %s\n", sd_last_error());
        return 1;
    }
    if (!r.swap_identity_holds) return 1;
    if (sd_graph_gnp(5, 2.0, 0, &g) != SD_STATUS_INVALID_ARGUMENT) return 1;
    if (sd_last_error() == NULL) return 1;
    sd_coloring_free(c);
    sd_graph_free(g);
    printf("ok %lld\n", (long long)r.signed_sum);
    return 0;
}

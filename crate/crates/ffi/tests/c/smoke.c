#include <stdio.h>
#include "gqflag.h"

/* Builds W(2), checks its order, fuses, scrambles and rebuilds it. */
int main(void) {
    GqfStructure *w2 = NULL, *back = NULL;
    GqfScheme *flags = NULL, *fused = NULL, *mixed = NULL;
    uint64_t s = 0, t = 0;
    int64_t p = 0;
    if (gqf_structure_build_symplectic(2, &w2) != GQF_STATUS_OK) return 10;
    if (gqf_structure_verify(w2, &s, &t) != GQF_STATUS_OK || s != 2 || t != 2) return 11;
    if (gqf_scheme_from_structure(w2, &flags) != GQF_STATUS_OK) return 12;
    if (gqf_scheme_intersection_number(flags, 1, 4, 5, &p) != GQF_STATUS_OK) return 13;
    if (gqf_scheme_fuse_four_class(flags, &fused) != GQF_STATUS_OK) return 14;
    if (gqf_scheme_scramble(fused, 3, &mixed) != GQF_STATUS_OK) return 15;
    if (gqf_reconstruct_4class(mixed, &back) != GQF_STATUS_OK) return 16;
    if (gqf_structure_verify(back, &s, &t) != GQF_STATUS_OK || s != 2 || t != 2) return 17;
    if (gqf_structure_build_symplectic(6, &w2) != GQF_STATUS_COMPOSITE_PARAMETER) return 18;
    printf("p=%lld err=%s\n", (long long)p, gqf_last_error_message());
    gqf_structure_free(back);
    gqf_scheme_free(mixed);
    gqf_scheme_free(fused);
    gqf_scheme_free(flags);
    gqf_structure_free(w2);
    return 0;
}

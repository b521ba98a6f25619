#include <stdio.h>
#include <string.h>
#include "quiver_findim.h"

static const char *A2 =
    "field Q\nquiver\n  vertex 1\n  vertex 2\n  arrow a 1 2\nend\norder lenlex\nrelations\nend\n";

int main(void) {
    QfAlgebra *alg = NULL;
    if (qf_algebra_parse(A2, &alg) != QF_STATUS_OK) return 1;
    size_t dim = 0;
    if (qf_algebra_dimension(alg, &dim) != QF_STATUS_OK || dim != 3) return 2;
    size_t pd = 0;
    bool exact = false;
    if (qf_projective_dimension(alg, "S1", 4, &pd, &exact) != QF_STATUS_OK) return 3;
    if (pd != 1 || !exact) return 4;
    char *nf = NULL;
    if (qf_normal_form(alg, "a + a", &nf) != QF_STATUS_OK) return 5;
    printf("%s\n", nf);
    qf_string_free(nf);
    if (qf_projective_dimension(alg, "Q1", 4, &pd, &exact) != QF_STATUS_INVALID_ARGUMENT) return 6;
    if (qf_last_error_message() == NULL) return 7;
    qf_algebra_free(alg);
    return 0;
}

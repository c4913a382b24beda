#include <stdio.h>
#include <string.h>
#include "adic_shifts.h"

#define CHECK(cond) do { if (!(cond)) { fprintf(stderr, "failed: %s (%s)\n", #cond, adic_last_error()); return 1; } } while (0)

int main(void) {
    AdicSpace *space = NULL;
    CHECK(adic_space_new(2, 4, &space) == ADIC_STATUS_OK);
    CHECK(adic_space_dim(space) == 31);

    AdicOperator *s = NULL, *ss = NULL, *prod = NULL;
    CHECK(adic_shift_new(space, ADIC_SHIFT_S, false, &s) == ADIC_STATUS_OK);
    CHECK(adic_shift_new(space, ADIC_SHIFT_S, true, &ss) == ADIC_STATUS_OK);
    CHECK(adic_operator_mul(ss, s, &prod) == ADIC_STATUS_OK);
    double re = 0, im = 0;
    CHECK(adic_operator_entry(prod, 2, 1, 2, 1, &re, &im) == ADIC_STATUS_OK);
    CHECK(re > 1 - 1e-14 && re < 1 + 1e-14);

    AdicOperator *bad = NULL;
    CHECK(adic_operator_parse(space, "Z", &bad) == ADIC_STATUS_PARSE_ERROR);
    CHECK(strlen(adic_last_error()) > 0);

    bool pass = false;
    double resid = 1;
    CHECK(adic_run_check("cuntz.sum_relation", 2, 4, adic_default_seed(), 0.0, &pass, &resid) == ADIC_STATUS_OK);
    CHECK(pass);

    adic_operator_free(s);
    adic_operator_free(ss);
    adic_operator_free(prod);
    adic_space_free(space);
    puts("ok");
    return 0;
}

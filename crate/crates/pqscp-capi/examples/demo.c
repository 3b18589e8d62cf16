/* Minimal C consumer: build the static library first, then
 *
 *   cargo build -p pqscp-capi
 *   cc examples/demo.c -Iinclude -L../../target/debug -lpqscp_capi -lm -o demo
 *   ./demo
 */

#include <stdio.h>
#include <stdlib.h>

#include "pqscp.h"

int main(void) {
    PqscpSolver *solver = NULL;
    if (pqscp_solver_new(2, 3, &solver) != PQSCP_STATUS_OK) {
        fprintf(stderr, "solver creation failed\n");
        return 1;
    }

    char *value = NULL;
    if (pqscp_g(solver, "750", &value) != PQSCP_STATUS_OK) {
        fprintf(stderr, "G(750) failed: %s\n", pqscp_solver_last_error(solver));
        pqscp_solver_free(solver);
        return 1;
    }
    printf("G(750) = %s\n", value);
    pqscp_string_free(value);

    uint64_t a = 0, b = 0;
    char *part = NULL;
    if (pqscp_y(solver, "486", &a, &b, &part) != PQSCP_STATUS_OK) {
        fprintf(stderr, "y_486 failed: %s\n", pqscp_solver_last_error(solver));
        pqscp_solver_free(solver);
        return 1;
    }
    printf("y_486 = %s = 2^%llu * 3^%llu\n", part, (unsigned long long)a,
           (unsigned long long)b);
    pqscp_string_free(part);

    pqscp_solver_free(solver);
    return 0;
}

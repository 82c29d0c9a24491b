/* Minimal consumer of the C API: run the bundled scenario and range one
 * synthetic window.
 *
 *   cc demo.c -I../include -L../../../target/debug -lsdradar_ffi -lm -lpthread -ldl
 */
#include <stdio.h>
#include "sdradar.h"

static int check(enum SdrStatus s, const char *what) {
    if (s != SDR_STATUS_OK) {
        char msg[256];
        sdr_last_error(msg, sizeof msg);
        fprintf(stderr, "%s failed (%d): %s\n", what, (int)s, msg);
        return 1;
    }
    return 0;
}

int main(void) {
    SdrScenario *sc = NULL;
    SdrRun *run = NULL;
    if (check(sdr_scenario_load("fig5", &sc), "load")) return 1;
    if (check(sdr_scenario_configure(sc, 100, 2013), "configure")) return 1;
    if (check(sdr_run_monte_carlo(sc, &run), "run")) return 1;
    printf("trials=%zu success_rate=%.3f\n", sdr_run_trials(run), sdr_run_success_rate(run));

    int8_t code[128];
    size_t n = 0;
    if (check(sdr_pnc128(code, 128, &n), "pnc128")) return 1;
    double window[256];
    for (size_t i = 0; i < 128; i++) {
        window[2 * i] = code[(i + 128 - 9) % 128];
        window[2 * i + 1] = 0.0;
    }
    size_t reference = 0, bins[16], nb = 0;
    if (check(sdr_process_window(NULL, window, 128, 0.25, &reference, bins, 16, &nb), "process")) return 1;
    printf("reference_bin=%zu peaks=%zu\n", reference, nb);

    sdr_run_free(run);
    sdr_scenario_free(sc);
    return 0;
}

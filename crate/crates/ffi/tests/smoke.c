#include <math.h>
#include <stdio.h>
#include <string.h>

#include "risbench.h"

static const char *CONFIG =
    "[room]\nwidth = 10.0\n[material]\nname = \"concrete\"\n"
    "[study]\nsamples = 20\nseed = 4\nambient_mode = \"power_sum\"\n";

int main(void) {
    RbComplex h;
    if (rb_hankel1(0, 1.0, &h) != RB_STATUS_OK || fabs(h.re - 0.7651976866) > 1e-9) {
        return 1;
    }
    if (rb_hankel1(2, 1.0, &h) != RB_STATUS_INVALID_ARGUMENT || strlen(rb_last_error_message()) == 0) {
        return 2;
    }
    RbStudy *study = NULL;
    if (rb_study_from_toml(CONFIG, &study) != RB_STATUS_OK) {
        return 3;
    }
    RbCdf *cdf = NULL;
    uint64_t saturated = 99;
    if (rb_study_equivalent_size_cdf(study, RB_SERIES_POWER_SUM, &cdf, &saturated) != RB_STATUS_OK) {
        return 4;
    }
    double q90;
    if (rb_cdf_len(cdf) != 20 || rb_cdf_quantile(cdf, 0.9, &q90) != RB_STATUS_OK || !(q90 > 0.0 && q90 <= 10.0)) {
        return 5;
    }
    rb_cdf_free(cdf);
    if (rb_study_ambient_cdf(study, RB_SERIES_COHERENT, &cdf) != RB_STATUS_CONFIG) {
        return 6;
    }
    rb_study_free(study);
    if (rb_study_from_toml("[room]\nwidth = 10.0\nbeta = 2.0\n", &study) != RB_STATUS_CONFIG) {
        return 7;
    }
    printf("q90 = %.4f m, saturated = %llu\n", q90, (unsigned long long)saturated);
    return 0;
}

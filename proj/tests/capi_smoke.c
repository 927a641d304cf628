/* The public header must compile as C and the library must link from C. */
#include <stdio.h>

#include "nsac/nsac.h"

int main(void) {
  nsac_fan* fan = NULL;
  nsac_fan_info info;
  if (nsac_fan_solve(1.4, 0.8, 0.5, 0.8, -0.5, 0.0, 1.0, &fan) != NSAC_OK) {
    fprintf(stderr, "fan: %s\n", nsac_last_error());
    return 1;
  }
  if (nsac_fan_info_get(fan, &info) != NSAC_OK || !(info.s1 < 0.0 && info.s2 > 0.0)) return 1;
  nsac_fan_destroy(fan);
  if (nsac_fan_solve(1.4, 1.0, 0.0, 8.0, 0.0, 0.0, 1.0, &fan) != NSAC_ERR_ADMISSIBILITY) return 1;
  printf("capi smoke ok (%s)\n", nsac_version());
  return 0;
}

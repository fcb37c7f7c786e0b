#include <math.h>
#include <stdio.h>
#include <string.h>

#include "qwalk.h"

#define CHECK(call)                                                        \
  do {                                                                     \
    QwalkStatus s_ = (call);                                               \
    if (s_ != QWALK_STATUS_OK) {                                           \
      fprintf(stderr, "%s failed: %d %s\n", #call, s_, qwalk_last_error()); \
      return 1;                                                            \
    }                                                                      \
  } while (0)

int main(void) {
  const double hadamard = M_PI / 8.0;
  QwalkState *state = NULL;
  QwalkDistribution *d = NULL;
  QwalkNetwork *net = NULL;
  double p[7];
  char *dump = NULL;

  CHECK(qwalk_state_new(0.0, 0.0, 0, 3, &state));
  CHECK(qwalk_state_evolve(state, hadamard, 3));
  CHECK(qwalk_state_distribution(state, &d));
  CHECK(qwalk_distribution_copy(d, p, 7));
  printf("%.6f %.6f %.6f %.6f\n", p[0], p[2], p[4], p[6]);
  if (fabs(p[4] - 0.625) > 1e-12) return 1;

  if (qwalk_state_evolve(state, hadamard, 1) != QWALK_STATUS_CAPACITY) return 1;
  if (qwalk_last_error() == NULL) return 1;
  qwalk_distribution_free(d);
  qwalk_state_free(state);

  CHECK(qwalk_network_build(3, hadamard, &net));
  CHECK(qwalk_network_propagate(net, 0.0, 0.0, &d));
  double q;
  CHECK(qwalk_distribution_get(d, 1, &q));
  if (fabs(q - 0.625) > 1e-12) return 1;
  CHECK(qwalk_network_dump(net, &dump));
  if (strncmp(dump, "# qwalk optical network v1", 26) != 0) return 1;
  qwalk_string_free(dump);
  qwalk_distribution_free(d);
  qwalk_network_free(net);

  if (qwalk_distribution_len(NULL, NULL) != QWALK_STATUS_NULL_POINTER) return 1;
  printf("ok %s\n", qwalk_version());
  return 0;
}

/* Given deposit/withdrawal operations starting from zero, report whether the
 * balance ever falls below zero. */
int below_zero(const int *operations, int n) {
  int balance = 0;
  for (int i = 0; i < n; i++) {
    balance += operations[i];
    if (balance < 0)
      return 1;
  }
  return 0;
}

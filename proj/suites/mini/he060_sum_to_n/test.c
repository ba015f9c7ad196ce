int sum_to_n(int n);

int main(void) {
  int failed = 0;
  if (sum_to_n(1) != 1) failed++;
  if (sum_to_n(6) != 21) failed++;
  if (sum_to_n(11) != 66) failed++;
  if (sum_to_n(30) != 465) failed++;
  if (sum_to_n(100) != 5050) failed++;
  return failed;
}

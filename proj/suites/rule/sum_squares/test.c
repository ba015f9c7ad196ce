int square(int x);
int sum_squares(int a, int b);

int main(void) {
  int failed = 0;
  if (square(7) != 49) failed++;
  if (sum_squares(3, 4) != 25) failed++;
  if (sum_squares(-2, 0) != 4) failed++;
  return failed;
}

int factorial(int n);

int main(void) {
  int failed = 0;
  if (factorial(0) != 1) failed++;
  if (factorial(1) != 1) failed++;
  if (factorial(5) != 120) failed++;
  if (factorial(10) != 3628800) failed++;
  return failed;
}

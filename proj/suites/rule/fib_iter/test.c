int fib_iter(int n);

int main(void) {
  int failed = 0;
  if (fib_iter(0) != 0) failed++;
  if (fib_iter(1) != 1) failed++;
  if (fib_iter(10) != 55) failed++;
  if (fib_iter(20) != 6765) failed++;
  return failed;
}

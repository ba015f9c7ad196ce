int is_prime(int n);

int main(void) {
  int failed = 0;
  if (is_prime(6) != 0) failed++;
  if (is_prime(101) != 1) failed++;
  if (is_prime(11) != 1) failed++;
  if (is_prime(13441) != 1) failed++;
  if (is_prime(61) != 1) failed++;
  if (is_prime(4) != 0) failed++;
  if (is_prime(1) != 0) failed++;
  if (is_prime(85) != 0) failed++;
  if (is_prime(13441 * 19) != 0) failed++;
  return failed;
}

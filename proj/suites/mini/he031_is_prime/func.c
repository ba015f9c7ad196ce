int is_prime(int n) {
  if (n < 2)
    return 0;
  for (int k = 2; k * k <= n; k++)
    if (n % k == 0)
      return 0;
  return 1;
}

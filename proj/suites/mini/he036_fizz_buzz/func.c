/* Count the digit 7 in integers below n divisible by 11 or 13. */
int fizz_buzz(int n) {
  int count = 0;
  for (int i = 0; i < n; i++) {
    if (i % 11 == 0 || i % 13 == 0) {
      int q = i;
      while (q > 0) {
        if (q % 10 == 7)
          count++;
        q = q / 10;
      }
    }
  }
  return count;
}

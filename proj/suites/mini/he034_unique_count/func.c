/* Sort the list in place (insertion sort) and return the number of distinct
 * values, which are compacted to the front. */
int unique(int *l, int n) {
  for (int i = 1; i < n; i++) {
    int key = l[i];
    int j = i - 1;
    while (j >= 0 && l[j] > key) {
      l[j + 1] = l[j];
      j--;
    }
    l[j + 1] = key;
  }
  int m = 0;
  for (int i = 0; i < n; i++)
    if (m == 0 || l[m - 1] != l[i])
      l[m++] = l[i];
  return m;
}

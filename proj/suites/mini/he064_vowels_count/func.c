/* Count vowels; 'y' counts only at the end of the word. */
int vowels_count(const char *s) {
  int count = 0;
  int n = 0;
  while (s[n] != '\0') {
    char c = s[n];
    if (c >= 'A' && c <= 'Z')
      c = c - 'A' + 'a';
    if (c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u')
      count++;
    n++;
  }
  if (n > 0 && (s[n - 1] == 'y' || s[n - 1] == 'Y'))
    count++;
  return count;
}

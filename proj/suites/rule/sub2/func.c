int sub2(int a, int b) { return a - b; }

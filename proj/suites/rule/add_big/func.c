int add_big(int a) { return a + 100000; }

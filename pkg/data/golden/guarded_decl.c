void foo(int x) {
	int a = 0;
	if (a < MIN) {
	   int b = a*MIN;
	}
}

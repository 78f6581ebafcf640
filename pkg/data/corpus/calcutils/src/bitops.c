#include <stdio.h>

int popcount(unsigned int x) {
    int count = 0;
    while (x) {
        count += x & 1;
        x >>= 1;
    }
    return count;
}

int parity(unsigned int x) {
    int p = 0;
    int mask = 1 | 2;
    for (p = 0; x; x = x >> 1) {
        p = p ^ (x & 1);
    }
    printf("parity %d\n", p);
    return p & mask;
}

void dump(const int *values, int n) {
    int i;
    int width = 8;
    for (i = 0; i < n; i++) {
        printf("%*d\n", width, values[i]);
    }
    puts("done");
}

int checked_div(int a, int b) {
    if (b == 0) {
        fprintf(stderr, "division by zero\n");
        exit(2);
    }
    int q = a / b;
    return q;
}

int main(void) {
    int values[4] = {1, 2, 3, 4};
    int total = 0;
    total = 1 + 2 + 3 + 4;
    dump(values, 4);
    printf("%d\n", popcount(total));
    return 0;
}

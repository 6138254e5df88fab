class Operators {
    int mix(int a, int b, int c) {
        int r = a + b * c - a / b % c;
        r -= 1;
        r *= 2;
        r /= 3;
        r %= 5;
        r += -a;
        return r;
    }

    boolean logic(boolean p, boolean q) {
        return !p && q || p != q && (p == q);
    }

    int bits(int x, int y) {
        return x & y | x ^ ~y;
    }
}

public class Stats {
    public static double mean(double[] xs) {
        double sum = 0.0;
        for (int i = 0; i < xs.length; i++) {
            sum += xs[i];
        }
        return sum / xs.length;
    }

    public static double variance(double[] xs) {
        double m = mean(xs);
        double acc = 0;
        int n = xs.length;
        for (double x : xs) {
            acc = acc + (x - m) * (x - m);
        }
        System.out.println("variance of " + n + " samples");
        return acc / n;
    }

    public static int max(int[] xs) {
        int best = xs[0];
        int i = 1;
        while (i < xs.length) {
            if (xs[i] > best) {
                best = xs[i];
            }
            i++;
        }
        return best;
    }

    public static int gcd(int a, int b) {
        while (b != 0) {
            int t = b;
            b = a % b;
            a = t;
        }
        return a;
    }

    public static int factorial(int n) {
        int result = 1;
        int base = 1;
        for (int k = 2; k <= n; k++) {
            result = result * k;
        }
        System.out.println(result);
        return result * base;
    }

    public static boolean isPrime(int n) {
        if (n < 2) {
            return false;
        }
        int limit = n / 2;
        for (int d = 2; d <= limit; d++) {
            if (n % d == 0) {
                return false;
            }
        }
        return true;
    }

    public static int clamp(int v, int lo, int hi) {
        int out = v;
        if (out < lo) {
            out = lo;
        } else if (out > hi) {
            out = hi;
        }
        return out;
    }

    public static int sumDigits(int n) {
        int total = 0;
        int radix = 10;
        while (n > 0) {
            total = total + n % radix;
            n = n / radix;
        }
        return total;
    }
}

public static void foo(String[] args) {
   for (; i <= n; ++i) {
     System.out.println("Printer");
   }
 }

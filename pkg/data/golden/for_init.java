public static void foo(String[] args) {
   for (int i = 1; i <= n; ++i) {
     System.out.println("Printer");
   }
 }

public class Smtp {
    private String host;
    private int port;
    private int retries;

    public Smtp(String host) {
        this.host = host;
        port = 25;
        retries = 3;
    }

    public boolean send(String to, String body) {
        int attempt = 0;
        boolean ok = false;
        while (attempt < retries && !ok) {
            try {
                connect();
                ok = true;
            } catch (Exception e) {
                attempt = attempt + 1;
                System.err.println("retrying " + attempt);
            }
        }
        System.out.println("send finished");
        return ok;
    }

    private void connect() throws Exception {
        int timeout = 30 * 1000;
        if (host == null) {
            throw new Exception("no host");
        }
        open(host, port, timeout);
    }

    public int checksum(String data) {
        int sum = 0;
        int mask = 0xff;
        for (int i = 0; i < data.length(); i++) {
            sum = (sum + data.charAt(i)) & mask;
        }
        return sum;
    }

    public boolean isSecure() {
        boolean secure = port == 465 || port == 587;
        return secure;
    }

    public void configure(int newPort, int newRetries) {
        if (newPort > 0) {
            port = newPort;
        } else {
            port = 25;
        }
        retries = newRetries;
        int version = 1;
        System.out.println("configured");
    }

    public String greeting() {
        String name = host;
        int code = 220;
        return code + " " + name;
    }
}

import java.util.ArrayList;
import java.util.List;

public class Inbox {
    private List<Message> messages = new ArrayList<>();
    private int unread;
    private static final Log log = LogFactory.getLog(Inbox.class);

    public void clear() {
        messages.clear();
        unread = 0;
        log.info("inbox cleared");
    }

    public int size() {
        return messages.size();
    }

    public void deliver(Message m) {
        int priority = 2;
        if (m == null) {
            System.out.println("dropping null message");
            return;
        }
        messages.add(m);
        unread = unread + 1;
        System.out.println("delivered " + m);
    }

    public Message latest() {
        int last = messages.size() - 1;
        if (last < 0) {
            return null;
        }
        return messages.get(last);
    }

    public int countUnread() {
        int n = 0;
        int i = 0;
        while (i < messages.size()) {
            if (!messages.get(i).isRead()) {
                n = n + 1;
            }
            i = i + 1;
        }
        return n;
    }

    public void markAllRead() {
        for (int i = 0; i < messages.size(); i++) {
            messages.get(i).setRead(true);
        }
        unread = 0;
        System.out.println("all read");
    }

    public boolean contains(String subject) {
        boolean hit = false;
        for (Message m : messages) {
            if (m.subject().equals(subject)) {
                hit = true;
                break;
            }
        }
        return hit;
    }

    public void purge(int keep) {
        int removed = 0;
        while (messages.size() > keep) {
            messages.remove(0);
            removed++;
        }
        log.debug("purged " + removed);
    }

    public void shutdown() {
        log.warn("shutting down");
        System.exit(0);
    }

    public String summary() {
        String s = "";
        int total = messages.size();
        int limit = 3 << 2;
        if (total > limit) {
            s = "many";
        } else {
            s = "few";
        }
        System.out.printf("%s%n", s);
        return s + total;
    }
}

package chart;

public class Timeline {
    private int start;
    private int end;
    private int[] marks;

    public int length() {
        return end - start;
    }

    public void shift(int days) {
        int offset = 0;
        offset = 3;
        start = start + days + offset;
        end = end + days + offset;
        System.out.println("shifted by " + days);
    }

    public int firstMark() {
        int index = 0;
        while (index < marks.length) {
            if (marks[index] > 0) {
                return marks[index];
            }
            index++;
        }
        return -1;
    }

    public void reset() {
        start = 0;
        end = 0;
        marks = new int[8];
    }

    public void validate() {
        if (start > end) {
            System.err.println("invalid timeline");
            System.exit(1);
        }
        int checked = 1;
    }

    public int weeks() {
        int days = end - start;
        int perWeek = 7;
        int total = 0;
        for (total = 0; days > perWeek; days = days - perWeek) {
            total++;
        }
        return total;
    }

    public String render() {
        StringBuilder sb = new StringBuilder();
        int i = 1;
        for (; i <= marks.length; ++i) {
            sb.append(marks[i - 1]);
            System.out.println("Printer");
        }
        return sb.toString();
    }

    public int load(String path) {
        int lines = 0;
        try {
            Reader reader = open(path);
            lines = reader.count();
            System.out.println("loaded " + lines);
        } catch (IOException e) {
            int failed = -1;
            logger.error("cannot load " + path);
            return failed;
        } finally {
            int closed = 1;
        }
        return lines;
    }
}

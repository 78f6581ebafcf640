package chart;

import java.util.List;

public class TaskBar {
    private int width;
    private int height;
    private String label;
    private static final Logger logger = Logger.getLogger("TaskBar");

    public TaskBar(int width, int height) {
        this.width = width;
        this.height = height;
    }

    public boolean hasCdata() {
        boolean found = false;
        int limit = 16 * 4;
        if (label == null) {
            return false;
        }
        for (int i = 0; i < label.length(); i++) {
            if (label.charAt(i) == '<') {
                found = true;
            }
        }
        return found;
    }

    public int area() {
        int scale = 1;
        System.out.println("computing area");
        return width * height * scale;
    }

    public void resize(int dw, int dh) {
        int minWidth = 10;
        int minHeight = 2 + 3;
        width = width + dw;
        height = height + dh;
        if (width < minWidth) {
            width = minWidth;
        }
        if (height < minHeight) {
            height = 5;
        }
        logger.debug("resized to " + width + "x" + height);
    }

    public String describe() {
        String text = "bar";
        text = text + ":" + width;
        System.out.println(text);
        return text;
    }

    public int clampedWidth(int max) {
        int result = width;
        while (result > max) {
            result = result - 1;
            int step = 1;
        }
        return result;
    }

    public void drawRow(List<String> cells) {
        int column = 0;
        for (String cell : cells) {
            System.out.print(cell);
            column = column + 1;
        }
        System.out.println();
    }

    public int countMilestones(int[] days) {
        int count = 0;
        int threshold = (7 * 2) - 1;
        for (int i = 0; i < days.length; ++i) {
            if (days[i] > threshold) {
                count++;
            } else {
                count = count + 0;
            }
        }
        return count;
    }

    public boolean overlaps(TaskBar other) {
        boolean left = width < other.width;
        boolean tall = height >= other.height;
        return left && tall;
    }
}

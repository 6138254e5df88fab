class StringUtil {
    static String repeat(String s, int times) {
        String out = "";
        for (int i = 0; i < times; i++) {
            out = out + s;
        }
        return out;
    }

    static boolean isBlank(String s) {
        return s == null || s.trim().isEmpty();
    }
}

class Chars {
    boolean isVowel(char c) {
        return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
    }

    int digit(char c) {
        return c - '0';
    }
}

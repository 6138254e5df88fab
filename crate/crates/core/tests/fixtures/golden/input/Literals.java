class Literals {
    long big = 123456789L;
    float ratio = 0.5f;
    double tiny = 1e-9;
    double precise = 3.25d;
    int hex = 0xFF;
    char letter = 'x';
    char escaped = '\n';
    String text = "quote \" inside";
    boolean yes = true;
    boolean no = false;
    Object nothing = null;
}

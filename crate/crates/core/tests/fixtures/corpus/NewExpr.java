class NewExpr {
    Point origin() {
        return new Point(0, 0);
    }

    Point[] many(int n) {
        return new Point[n];
    }

    Object empty() {
        return new Object();
    }
}

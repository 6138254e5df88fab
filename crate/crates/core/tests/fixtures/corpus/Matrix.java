class Matrix {
    double[][] cells;

    Matrix(int n) {
        cells = new double[n][n];
    }

    double trace() {
        double t = 0.0;
        for (int i = 0; i < cells.length; i++) t += cells[i][i];
        return t;
    }
}

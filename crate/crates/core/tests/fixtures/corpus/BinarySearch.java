class BinarySearch {
    int search(int[] xs, int key, int lo, int hi) {
        if (lo > hi) return -1;
        int mid = (lo + hi) / 2;
        if (xs[mid] == key) return mid;
        if (xs[mid] < key) return search(xs, key, mid + 1, hi);
        return search(xs, key, lo, mid - 1);
    }
}

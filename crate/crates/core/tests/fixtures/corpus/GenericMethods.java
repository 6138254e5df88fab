class GenericMethods {
    List<List<String>> groups;

    int count(List<List<String>> gs) {
        int n = 0;
        for (int i = 0; i < gs.size(); i++) {
            n += gs.get(i).size();
        }
        return n;
    }

    Map<String, Integer>[] buckets(int n) {
        return new Map[n];
    }
}

class Broken {
    int f( {
}

fn main() {
    // CLI wiring lands once the solvers are in place.
}

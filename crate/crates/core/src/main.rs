fn main() {
    // CLI filled in alongside the verify module.
}

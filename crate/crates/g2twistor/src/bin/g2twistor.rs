fn main() {
    println!("g2twistor");
}

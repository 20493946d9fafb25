// Acceptance gate: placeholder, filled in after the corpus lands.
int main() { return 0; }

def gen_<FORMAT>(rng, output):
    length = rng.read_byte()
    random_text = rng.read_chars(length)
    output.write(random_text)

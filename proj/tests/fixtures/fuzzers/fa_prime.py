def fuzzer_fa_prime(random: Random) -> str:
    random_len = random.randint(0, MAX_LEN)
    random_sequence = ""
    for _ in range(random_len):
        choice = random.randint(0, CHOICE_RANGE)
        if choice == 0:
            random_sequence += "("
        elif choice == 1:
            random_sequence += ")"
        else:
            random_sequence += "*"
    return random_sequence

def fuzzer_fd(random: Random) -> str:
    random_sequence = ""
    while len(random_sequence) < MAX_LEN:
        choice = random.randint(0, CHOICE_RANGE)
        if choice == 0:
            random_sequence += "*"
        else:
            break
    return random_sequence

def fuzzer_fj(random: Random) -> str:
    random_sequence = ""
    while len(random_sequence) < MAX_LEN:
        choice = random.randint(0, CHOICE_RANGE)
        if choice == 0:
            # Type error introduced by the LLM
            random_sequence += 1
        else:
            break
    return random_sequence

from macroblock.cli import main

main()

import os
import sys


def main(argv=None):
    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'resinfo.settings')
    try:
        from django.core.management import execute_from_command_line
    except ImportError as exc:
        raise ImportError(
            "Couldn't import Django. Install the packages in requirements.txt."
        ) from exc
    argv = list(sys.argv if argv is None else argv)
    # subcommands are spelled with hyphens on the command line
    if len(argv) > 1 and not argv[1].startswith('-'):
        argv[1] = argv[1].replace('-', '_')
    execute_from_command_line(['resinfo', *argv[1:]])


if __name__ == '__main__':
    main()

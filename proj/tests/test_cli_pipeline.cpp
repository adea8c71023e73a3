int placeholder_test_cli_pipeline;
